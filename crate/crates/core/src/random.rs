//! Seeded generators of filtered complexes, chain maps and deformations that
//! satisfy the hypotheses of the cone and deformation checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{suggest_sigma, ConeDeformation};
use crate::complex::FilteredComplex;
use crate::error::Result;
use crate::filtered::FilteredSpace;
use crate::grid::{ones, Grid, GridMatrix};
use crate::matrix::Matrix;
use crate::novikov::{Exponent, NovikovScalar};

/// Exponents are drawn from `(1/denominator)ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentPool {
    pub denominator: u32,
    /// Filtration levels lie in `[0, max_level]`.
    pub max_level: Exponent,
    /// Normal-form bar lengths lie in `(0, max_length]`.
    pub max_length: Exponent,
    /// Exponents of random `Λ_0` coefficients lie in `[0, max_coefficient]`.
    pub max_coefficient: Exponent,
}

impl Default for ExponentPool {
    fn default() -> Self {
        ExponentPool {
            denominator: 12,
            max_level: Exponent::integer(3),
            max_length: Exponent::integer(3),
            max_coefficient: Exponent::integer(2),
        }
    }
}

/// Which statement the instance is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// A complex with a chain map; `base0 = base`.
    Split,
    /// Two differentials with `𝒜(d − d0) ≥ A`; maps are zero.
    Basic,
    /// Cone deformation, low case.
    Low,
    /// Cone deformation, high case (equal homology, depth of `d` below `a`).
    High,
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub seed: u64,
    pub kind: InstanceKind,
    pub base0: FilteredComplex,
    pub base: FilteredComplex,
    pub map0: Matrix,
    pub map: Matrix,
    pub sigma: Exponent,
    pub a: Exponent,
    pub big_a: Exponent,
    /// Bar lengths of `(C, d0)` when they are fixed by construction.
    pub known_lengths: Option<Vec<Exponent>>,
}

impl RandomInstance {
    pub fn deformation(&self) -> ConeDeformation {
        ConeDeformation {
            base0: self.base0.clone(),
            base: self.base.clone(),
            map0: self.map0.clone(),
            map: self.map.clone(),
            sigma: self.sigma.clone(),
            a: self.a.clone(),
            big_a: self.big_a.clone(),
        }
    }
}

/// Generator slots: `pairs` (η, ζ) then `homology` x's.
struct Layout {
    pairs: usize,
    degree: Vec<i64>,
    levels: Vec<Exponent>,
    lengths: Vec<Exponent>,
}

impl Layout {
    fn eta(&self, k: usize) -> usize {
        2 * k
    }
    fn zeta(&self, k: usize) -> usize {
        2 * k + 1
    }
    fn dim(&self) -> usize {
        self.degree.len()
    }
    fn homology(&self) -> std::ops::Range<usize> {
        2 * self.pairs..self.dim()
    }
}

const UNITS: usize = 64 * 12;

struct Builder<'a> {
    rng: ChaCha8Rng,
    pool: &'a ExponentPool,
    grid: Grid,
}

impl Builder<'_> {
    /// Uniform grid point in `[lo, hi]` (in exponent units).
    fn point(&mut self, lo: &Exponent, hi: &Exponent) -> Exponent {
        let n = self.pool.denominator as i64;
        let a = (lo * &Exponent::integer(n)).ceil();
        let b = (hi * &Exponent::integer(n)).floor();
        let (a, b) = (to_i64(&a), to_i64(&b));
        Exponent::new(self.rng.gen_range(a..=b.max(a)), n)
    }

    fn units(&self, e: &Exponent) -> usize {
        self.grid.to_units(e).expect("pool exponent off the grid") as usize
    }

    /// Random `Λ_0` element with one or two terms, each at least `floor`.
    fn coefficient(&mut self, floor: &Exponent) -> Vec<u64> {
        let mut x = self.grid.zero();
        let terms = self.rng.gen_range(1..=2);
        for _ in 0..terms {
            let e = self.point(&Exponent::zero(), &self.pool.max_coefficient.clone());
            let k = self.units(&(floor + &e));
            x[k / 64] ^= 1 << (k % 64);
        }
        x
    }

    /// Coefficient that is zero with probability one half.
    fn sparse(&mut self, floor: &Exponent) -> Vec<u64> {
        if self.rng.gen_bool(0.5) {
            self.grid.zero()
        } else {
            self.coefficient(floor)
        }
    }

    fn layout(&mut self, dim: usize) -> Layout {
        let pairs = if dim < 2 { 0 } else { self.rng.gen_range(0..=dim / 2) };
        let mut degree = Vec::with_capacity(dim);
        let mut levels = Vec::with_capacity(dim);
        let mut lengths = Vec::with_capacity(pairs);
        let zero = Exponent::zero();
        let step = Exponent::new(1, self.pool.denominator as i64);
        for _ in 0..pairs {
            let k = self.rng.gen_range(0..=1);
            let eta = self.point(&zero, &self.pool.max_level.clone());
            let beta = self.point(&step, &self.pool.max_length.clone());
            degree.extend([k, k + 1]);
            levels.push(eta.clone());
            levels.push(&eta + &beta);
            lengths.push(beta);
        }
        for _ in 2 * pairs..dim {
            degree.push(self.rng.gen_range(0..=2));
            levels.push(self.point(&zero, &self.pool.max_level.clone()));
        }
        lengths.sort();
        Layout {
            pairs,
            degree,
            levels,
            lengths,
        }
    }

    /// Orthonormalized normal form `δ`: `δ̄ ζ_k = T^{β_k} η_k`.
    fn normal_form(&self, l: &Layout) -> GridMatrix {
        let mut m = GridMatrix::zeros(&self.grid, l.dim(), l.dim());
        for k in 0..l.pairs {
            let beta = &l.levels[l.zeta(k)] - &l.levels[l.eta(k)];
            m.set(l.eta(k), l.zeta(k), &self.grid.monomial(self.units(&beta)));
        }
        m
    }

    /// Perturbation from ζ slots into η slots (and into homology slots if
    /// `to_homology`), respecting degrees. With `triangular` only η_i with
    /// i < j is hit from ζ_j, which keeps `δ + E` of full rank.
    fn perturbation(&mut self, l: &Layout, floor: &Exponent, triangular: bool, to_homology: bool) -> GridMatrix {
        let mut m = GridMatrix::zeros(&self.grid, l.dim(), l.dim());
        for j in 0..l.pairs {
            let z = l.zeta(j);
            for i in 0..l.pairs {
                if (triangular && i >= j) || l.degree[l.eta(i)] + 1 != l.degree[z] {
                    continue;
                }
                let x = self.sparse(floor);
                m.set(l.eta(i), z, &x);
            }
            if to_homology {
                for x in l.homology() {
                    if l.degree[x] + 1 == l.degree[z] {
                        let c = self.sparse(floor);
                        m.set(x, z, &c);
                    }
                }
            }
        }
        m
    }

    /// Product of elementary matrices `I + c E_ij` between equal degrees,
    /// with `c` divisible by `T^floor`. Returns the product and its inverse.
    fn unimodular(&mut self, l: &Layout, floor: &Exponent) -> (GridMatrix, GridMatrix) {
        let n = l.dim();
        let mut q = GridMatrix::identity(&self.grid, n);
        let mut q_inv = GridMatrix::identity(&self.grid, n);
        if n < 2 {
            return (q, q_inv);
        }
        for _ in 0..n {
            let (i, j) = (self.rng.gen_range(0..n), self.rng.gen_range(0..n));
            if i == j || l.degree[i] != l.degree[j] {
                continue;
            }
            let c = self.coefficient(floor);
            // Right-multiply by I + c E_ij; its inverse is itself in
            // characteristic two.
            q.col_axpy(&self.grid, j, i, &c);
            q_inv.row_axpy(&self.grid, i, j, &c);
        }
        (q, q_inv)
    }

    /// Endomorphism of degree `shift` with entries divisible by `T^floor`,
    /// supported on `slots`.
    fn endomorphism(&mut self, l: &Layout, slots: &[usize], shift: i64, floor: &Exponent) -> GridMatrix {
        let mut m = GridMatrix::zeros(&self.grid, l.dim(), l.dim());
        for &i in slots {
            for &j in slots {
                if l.degree[i] == l.degree[j] + shift {
                    let c = self.sparse(floor);
                    m.set(i, j, &c);
                }
            }
        }
        m
    }

    fn mul(&self, a: &GridMatrix, b: &GridMatrix) -> GridMatrix {
        assert!(
            top(a) + top(b) < UNITS,
            "random instance exponents exceed the construction grid"
        );
        a.matmul(&self.grid, b)
    }

    fn add(&self, a: &GridMatrix, b: &GridMatrix) -> GridMatrix {
        let mut out = a.clone();
        for i in 0..a.rows {
            for j in 0..a.cols {
                Grid::xor_into(out.get_mut(i, j), b.get(i, j));
            }
        }
        out
    }

    fn conjugate(&self, q: &(GridMatrix, GridMatrix), m: &GridMatrix) -> GridMatrix {
        self.mul(&self.mul(&q.0, m), &q.1)
    }

    /// `D̄ = P + N h + h N` for the orthonormalized differential `N`.
    fn chain_map(&self, n: &GridMatrix, p: &GridMatrix, h: &GridMatrix) -> GridMatrix {
        self.add(p, &self.add(&self.mul(n, h), &self.mul(h, n)))
    }

    /// Raw coordinates: `M_ij = M̄_ij · T^{A_i − A_j}`.
    fn raw(&self, l: &Layout, m: &GridMatrix) -> Matrix {
        Matrix::from_fn(m.rows, m.cols, |i, j| {
            let x = NovikovScalar::from_exponents(
                ones(m.get(i, j)).map(|k| self.grid.units_to_exponent(k as i64)),
            );
            x.shift(&(&l.levels[i] - &l.levels[j]))
        })
    }

    fn complex(&self, l: &Layout, d: &GridMatrix) -> Result<FilteredComplex> {
        let names = (0..l.dim()).map(|i| format!("x{i}")).collect();
        let space = FilteredSpace::new(names, l.levels.clone())?.with_grading(l.degree.clone())?;
        FilteredComplex::new(space, self.raw(l, d))
    }
}

fn top(m: &GridMatrix) -> usize {
    let mut best = 0;
    for i in 0..m.rows {
        for j in 0..m.cols {
            let x = m.get(i, j);
            if let Some(w) = (0..x.len()).rev().find(|&w| x[w] != 0) {
                best = best.max(64 * w + 63 - x[w].leading_zeros() as usize);
            }
        }
    }
    best
}

fn to_i64(x: &num_bigint::BigInt) -> i64 {
    use num_traits::ToPrimitive;
    x.to_i64().expect("pool bound out of range")
}

/// Deterministic instance for `kind` on a complex of dimension `dim`.
pub fn random_instance(seed: u64, dim: usize, pool: &ExponentPool, kind: InstanceKind) -> Result<RandomInstance> {
    let mut b = Builder {
        rng: ChaCha8Rng::seed_from_u64(seed),
        pool,
        grid: Grid::new(pool.denominator as u64, UNITS),
    };
    let l = b.layout(dim);
    let step = Exponent::new(1, pool.denominator as i64);
    let zero = Exponent::zero();
    let max_beta = l.lengths.last().cloned().unwrap_or_else(Exponent::zero);
    let two = Exponent::integer(2);
    // Bounds above the shortest constructed length leave something to compare.
    let min_beta = l.lengths.first().cloned().unwrap_or_else(Exponent::zero);
    let (a, big_a) = match kind {
        InstanceKind::Split => (zero.clone(), zero.clone()),
        InstanceKind::Basic => (zero.clone(), b.point(&(&min_beta + &step), &(&max_beta + &two))),
        InstanceKind::Low => {
            let a = b.point(&(&min_beta + &step), &(&max_beta + &two));
            let big_a = b.point(&(&a + &step), &(&a + &two));
            (a, big_a)
        }
        InstanceKind::High => {
            let a = b.point(&(&max_beta + &step), &(&max_beta + &two));
            let big_a = b.point(&(&a + &step), &(&a + &two));
            (a, big_a)
        }
    };
    let delta = b.normal_form(&l);
    // Perturbations at or above max β keep the bar lengths of δ + E equal
    // to those of δ.
    let known = matches!(kind, InstanceKind::Split | InstanceKind::High);
    let e0_floor = if known { max_beta.clone() } else { zero.clone() };
    let chain = kind != InstanceKind::Basic;
    let e0 = b.perturbation(&l, &e0_floor, chain, !chain);
    let n0 = b.add(&delta, &e0);
    let q = b.unimodular(&l, &zero);
    let d0 = b.conjugate(&q, &n0);

    let (d, n1, q1) = match kind {
        InstanceKind::Split => (d0.clone(), n0.clone(), None),
        InstanceKind::Basic => {
            let e1 = b.perturbation(&l, &big_a, false, true);
            let k = b.unimodular(&l, &big_a);
            let q1 = (b.mul(&q.0, &k.0), b.mul(&k.1, &q.1));
            let n1 = b.add(&n0, &e1);
            (b.conjugate(&q1, &n1), n1, Some(q1))
        }
        InstanceKind::Low | InstanceKind::High => {
            let e1 = b.perturbation(&l, &a, true, false);
            let k = b.unimodular(&l, &big_a);
            let q1 = (b.mul(&q.0, &k.0), b.mul(&k.1, &q.1));
            let n1 = b.add(&n0, &e1);
            (b.conjugate(&q1, &n1), n1, Some(q1))
        }
    };
    let base0 = b.complex(&l, &d0)?;
    let base = b.complex(&l, &d)?;
    let n = l.dim();
    let (map0, map) = if chain {
        let homology: Vec<usize> = l.homology().collect();
        let all: Vec<usize> = (0..n).collect();
        let p0 = b.endomorphism(&l, &homology, 0, &zero);
        let h_floor = &big_a - &a;
        let h = b.endomorphism(&l, &all, 1, &h_floor);
        let m0 = b.conjugate(&q, &b.chain_map(&n0, &p0, &h));
        let m = match &q1 {
            None => m0.clone(),
            Some(q1) => {
                let p1 = b.endomorphism(&l, &homology, 0, &big_a);
                b.conjugate(q1, &b.chain_map(&n1, &b.add(&p0, &p1), &h))
            }
        };
        (b.raw(&l, &m0), b.raw(&l, &m))
    } else {
        (Matrix::zeros(n, n), Matrix::zeros(n, n))
    };
    let sigma = if chain && n > 0 {
        let star = std::cmp::max(suggest_sigma(&base0)?, suggest_sigma(&base)?);
        let extra = b.point(&zero, &two);
        &star + &extra
    } else {
        zero
    };
    Ok(RandomInstance {
        seed,
        kind,
        base0,
        base,
        map0,
        map,
        sigma,
        a,
        big_a,
        known_lengths: known.then_some(l.lengths),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let pool = ExponentPool::default();
        let x = random_instance(0, 6, &pool, InstanceKind::Low).unwrap();
        let y = random_instance(0, 6, &pool, InstanceKind::Low).unwrap();
        assert_eq!(x.base.differential(), y.base.differential());
        assert_eq!(x.map, y.map);
        assert_eq!(x.sigma, y.sigma);
    }

    #[test]
    fn empty_instance() {
        let r = random_instance(3, 0, &ExponentPool::default(), InstanceKind::High).unwrap();
        assert_eq!(r.base.dim(), 0);
    }

    #[test]
    fn instances_are_valid_complexes() {
        let pool = ExponentPool::default();
        for kind in [InstanceKind::Split, InstanceKind::Basic, InstanceKind::Low, InstanceKind::High] {
            for seed in 0..20 {
                let r = random_instance(seed, 6, &pool, kind).unwrap();
                assert!(r.base0.validate().is_valid(), "{kind:?} {seed}");
                assert!(r.base.validate().is_valid(), "{kind:?} {seed}");
            }
        }
    }
}
