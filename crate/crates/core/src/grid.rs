//! Fast arithmetic in the truncated valuation ring `Λ_0 / T^Π` for elements
//! whose exponents lie on a common grid `(1/N)ℤ`.
//!
//! An element is a bitset over grid units: bit `k` is the coefficient of
//! `T^{k/N}`. Every operation is an exact ring operation in the quotient, so
//! eliminations carried out here are exact modulo `T^Π`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::novikov::{Exponent, NovikovScalar, Valuation};

pub(crate) type Elem = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Grid {
    /// Grid denominator `N`.
    pub denom: u64,
    /// Working precision in grid units.
    pub prec: usize,
    pub words: usize,
}

/// Least common multiple of the denominators of the given exponents.
pub(crate) fn common_denominator<'a, I: IntoIterator<Item = &'a Exponent>>(exps: I) -> u64 {
    let mut n = BigInt::from(1u32);
    for e in exps {
        n = n.lcm(e.denom());
    }
    n.to_u64().expect("grid denominator overflows u64")
}

impl Grid {
    pub fn new(denom: u64, prec: usize) -> Self {
        Grid {
            denom,
            prec,
            words: prec.div_ceil(64).max(1),
        }
    }

    /// Grid with denominator `denom` and precision `precision` (rounded up to
    /// a grid point).
    pub fn for_precision(denom: u64, precision: &Exponent) -> Result<Self> {
        let scaled = precision * &Exponent::integer(denom as i64);
        let units = scaled.ceil();
        if units <= BigInt::zero() {
            return Err(Error::PrecisionExhausted {
                precision: precision.to_string(),
                detail: "working precision must be positive".into(),
            });
        }
        let p = units.to_usize().ok_or_else(|| Error::PrecisionExhausted {
            precision: precision.to_string(),
            detail: "working precision too large".into(),
        })?;
        Ok(Grid::new(denom, p))
    }

    pub fn precision(&self) -> Exponent {
        self.units_to_exponent(self.prec as i64)
    }

    /// Exponent as an integer number of grid units, if it lies on the grid.
    pub fn to_units(&self, e: &Exponent) -> Option<i64> {
        let scaled = e * &Exponent::integer(self.denom as i64);
        if scaled.is_integer() {
            scaled.numer().to_i64()
        } else {
            None
        }
    }

    pub fn units_to_exponent(&self, k: i64) -> Exponent {
        Exponent::new(k, self.denom as i64)
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.words]
    }

    pub fn monomial(&self, k: usize) -> Elem {
        let mut x = self.zero();
        if k < self.prec {
            x[k / 64] |= 1 << (k % 64);
        }
        x
    }

    pub fn one(&self) -> Elem {
        self.monomial(0)
    }

    fn mask(&self, x: &mut [u64]) {
        let r = self.prec % 64;
        if r != 0 {
            x[self.words - 1] &= (1u64 << r) - 1;
        }
        if self.prec == 0 {
            x.iter_mut().for_each(|w| *w = 0);
        }
    }

    /// Embed a scalar; it must have nonnegative exponents on the grid.
    /// Terms at or above the working precision are dropped.
    pub fn from_scalar(&self, x: &NovikovScalar) -> Result<Elem> {
        let mut out = self.zero();
        for e in x.terms() {
            let k = self.to_units(e).ok_or_else(|| {
                Error::assertion("grid embedding", format!("exponent {e} is off the grid 1/{}", self.denom))
            })?;
            if k < 0 {
                return Err(Error::assertion(
                    "grid embedding",
                    format!("exponent {e} is negative"),
                ));
            }
            let k = k as usize;
            if k < self.prec {
                out[k / 64] |= 1 << (k % 64);
            }
        }
        Ok(out)
    }

    pub fn to_scalar(&self, x: &[u64]) -> NovikovScalar {
        let exps = ones(x).map(|k| self.units_to_exponent(k as i64));
        NovikovScalar::from_exponents(exps)
            .with_precision(Valuation::Finite(self.precision()))
    }

    pub fn is_zero(x: &[u64]) -> bool {
        x.iter().all(|&w| w == 0)
    }

    pub fn valuation(x: &[u64]) -> Option<usize> {
        x.iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn popcount(x: &[u64]) -> usize {
        x.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_into(dst: &mut [u64], src: &[u64]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
    }

    /// `dst += T^{k} · src`, truncated.
    pub fn add_shifted(&self, dst: &mut [u64], src: &[u64], k: usize) {
        if k >= self.prec {
            return;
        }
        let ws = k / 64;
        let bs = k % 64;
        let n = self.words;
        if bs == 0 {
            for i in (ws..n).rev() {
                dst[i] ^= src[i - ws];
            }
        } else {
            for i in (ws..n).rev() {
                let mut v = src[i - ws] << bs;
                if i > ws {
                    v |= src[i - ws - 1] >> (64 - bs);
                }
                dst[i] ^= v;
            }
        }
        self.mask(dst);
    }

    #[cfg(test)]
    pub fn shift_up(&self, x: &[u64], k: usize) -> Elem {
        let mut out = self.zero();
        self.add_shifted(&mut out, x, k);
        out
    }

    /// `x / T^{k}`; the top `k` units of the result are filled with zeros.
    pub fn shift_down(&self, x: &[u64], k: usize) -> Elem {
        let mut out = self.zero();
        if k >= self.prec {
            return out;
        }
        let ws = k / 64;
        let bs = k % 64;
        let n = self.words;
        for i in 0..n - ws {
            let mut v = x[i + ws] >> bs;
            if bs != 0 && i + ws + 1 < n {
                v |= x[i + ws + 1] << (64 - bs);
            }
            out[i] = v;
        }
        out
    }

    /// `dst += a · b`.
    pub fn mul_add_into(&self, dst: &mut [u64], a: &[u64], b: &[u64]) {
        let (sparse, dense) = if Self::popcount(a) <= Self::popcount(b) {
            (a, b)
        } else {
            (b, a)
        };
        for k in ones(sparse) {
            self.add_shifted(dst, dense, k);
        }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Elem {
        let mut out = self.zero();
        self.mul_add_into(&mut out, a, b);
        out
    }

    /// Frobenius: bit `k` moves to bit `2k`.
    pub fn square(&self, x: &[u64]) -> Elem {
        let mut out = self.zero();
        for k in ones(x) {
            let t = 2 * k;
            if t >= self.prec {
                break;
            }
            out[t / 64] |= 1 << (t % 64);
        }
        out
    }

    /// Inverse of a unit (bit 0 set), by the Newton step `y ↦ x·y²`.
    pub fn inv_unit(&self, x: &[u64]) -> Elem {
        debug_assert!(x[0] & 1 == 1, "not a unit");
        let one = self.one();
        let mut y = one.clone();
        // Each step doubles the number of correct low-order units.
        let mut correct = 1usize;
        loop {
            if correct >= self.prec {
                break;
            }
            y = self.mul(x, &self.square(&y));
            correct *= 2;
        }
        debug_assert_eq!(self.mul(x, &y), one);
        y
    }
}

/// Indices of set bits, increasing.
pub(crate) fn ones(x: &[u64]) -> impl Iterator<Item = usize> + '_ {
    x.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            }
        })
    })
}

/// Dense matrix over the truncated ring, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GridMatrix {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl GridMatrix {
    pub fn zeros(grid: &Grid, rows: usize, cols: usize) -> Self {
        GridMatrix {
            rows,
            cols,
            words: grid.words,
            data: vec![0; rows * cols * grid.words],
        }
    }

    pub fn identity(grid: &Grid, n: usize) -> Self {
        let mut m = Self::zeros(grid, n, n);
        for i in 0..n {
            m.get_mut(i, i)[0] = 1;
        }
        m
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.cols + j) * self.words
    }

    pub fn get(&self, i: usize, j: usize) -> &[u64] {
        let o = self.offset(i, j);
        &self.data[o..o + self.words]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut [u64] {
        let o = self.offset(i, j);
        &mut self.data[o..o + self.words]
    }

    pub fn set(&mut self, i: usize, j: usize, x: &[u64]) {
        self.get_mut(i, j).copy_from_slice(x);
    }

    /// `row[dst] += f · row[src]`.
    pub fn row_axpy(&mut self, grid: &Grid, dst: usize, src: usize, f: &[u64]) {
        debug_assert_ne!(dst, src);
        let w = self.words;
        let row_len = self.cols * w;
        let src_row: Vec<u64> = self.data[src * row_len..(src + 1) * row_len].to_vec();
        let dst_row = &mut self.data[dst * row_len..(dst + 1) * row_len];
        for k in ones(f) {
            for j in 0..self.cols {
                let s = &src_row[j * w..(j + 1) * w];
                if Grid::is_zero(s) {
                    continue;
                }
                grid.add_shifted(&mut dst_row[j * w..(j + 1) * w], s, k);
            }
        }
    }

    /// `col[dst] += f · col[src]`.
    pub fn col_axpy(&mut self, grid: &Grid, dst: usize, src: usize, f: &[u64]) {
        debug_assert_ne!(dst, src);
        for i in 0..self.rows {
            let s = self.get(i, src).to_vec();
            if Grid::is_zero(&s) {
                continue;
            }
            let mut d = self.get(i, dst).to_vec();
            grid.mul_add_into(&mut d, &s, f);
            self.set(i, dst, &d);
        }
    }

    pub fn row_scale(&mut self, grid: &Grid, r: usize, u: &[u64]) {
        for j in 0..self.cols {
            let x = grid.mul(self.get(r, j), u);
            self.set(r, j, &x);
        }
    }

    pub fn col_scale(&mut self, grid: &Grid, c: usize, u: &[u64]) {
        for i in 0..self.rows {
            let x = grid.mul(self.get(i, c), u);
            self.set(i, c, &x);
        }
    }

    pub fn matmul(&self, grid: &Grid, other: &GridMatrix) -> GridMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = GridMatrix::zeros(grid, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).to_vec();
                if Grid::is_zero(&a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if Grid::is_zero(b) {
                        continue;
                    }
                    let mut d = out.get(i, j).to_vec();
                    grid.mul_add_into(&mut d, &a, b);
                    out.set(i, j, &d);
                }
            }
        }
        out
    }

    /// Least valuation over all entries, with its lexicographically first
    /// position.
    pub fn min_valuation_in(
        &self,
        rows: &[usize],
        cols: &[usize],
    ) -> Option<(usize, usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for &i in rows {
            for &j in cols {
                if let Some(v) = Grid::valuation(self.get(i, j)) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> Grid {
        Grid::new(12, 150)
    }

    fn scalar(exps: &[u16]) -> NovikovScalar {
        NovikovScalar::from_exponents(exps.iter().map(|&k| Exponent::new(k as i64, 12)))
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let g = Grid::new(1, 3);
        let x = g.from_scalar(&"1 + T".parse().unwrap()).unwrap();
        let y = g.inv_unit(&x);
        assert_eq!(g.to_scalar(&y).to_string(), "T^0 + T^1 + T^2");
    }

    #[test]
    fn common_denominator_is_lcm() {
        let e = [Exponent::new(1, 4), Exponent::new(5, 6), Exponent::integer(3)];
        assert_eq!(common_denominator(&e), 12);
    }

    proptest! {
        #[test]
        fn grid_mul_matches_reference(a in prop::collection::vec(0u16..200, 0..8),
                                      b in prop::collection::vec(0u16..200, 0..8)) {
            let g = grid();
            let (x, y) = (scalar(&a), scalar(&b));
            let p = Valuation::Finite(g.precision());
            let reference = x.mul(&y).truncate(&p);
            let fast = g.to_scalar(&g.mul(&g.from_scalar(&x).unwrap(), &g.from_scalar(&y).unwrap()));
            prop_assert_eq!(fast.terms(), reference.terms());
            let sum = g.to_scalar(&{
                let mut s = g.from_scalar(&x).unwrap();
                Grid::xor_into(&mut s, &g.from_scalar(&y).unwrap());
                s
            });
            let sum_ref = x.add(&y).truncate(&p);
            prop_assert_eq!(sum.terms(), sum_ref.terms());
        }

        #[test]
        fn grid_inverse_matches_reference(a in prop::collection::vec(1u16..200, 0..8)) {
            let g = grid();
            let mut exps = a.clone();
            exps.push(0);
            let x = scalar(&exps).with_precision(Valuation::Finite(g.precision()));
            prop_assume!(x.valuation() == Valuation::Finite(Exponent::zero()));
            let reference = x.invert_unit().unwrap();
            let fast = g.to_scalar(&g.inv_unit(&g.from_scalar(&x).unwrap()));
            prop_assert_eq!(fast.terms(), reference.terms());
        }

        #[test]
        fn shifts_round_trip(a in prop::collection::vec(0u16..100, 0..8), k in 0usize..100) {
            let g = grid();
            let x = g.from_scalar(&scalar(&a)).unwrap();
            let up = g.shift_up(&x, k);
            let down = g.shift_down(&up, k);
            let cut = Valuation::Finite(Exponent::new((150 - k) as i64, 12));
            let expect = g.from_scalar(&scalar(&a).truncate(&cut)).unwrap();
            prop_assert_eq!(down, expect);
        }
    }
}
