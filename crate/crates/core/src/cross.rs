//! Quantum homology rings `Λ[a]/(a^{B} = q)` of the four CROSS families,
//! multiplication spectra with respect to a filtration on the power basis,
//! and the closed-form constants.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filtered::{FilteredMap, FilteredSpace};
use crate::matrix::Matrix;
use crate::novikov::{Exponent, NovikovScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    RPn,
    CPn,
    HPn,
    Sn,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::RPn, Family::CPn, Family::HPn, Family::Sn];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::RPn => "rpn",
            Family::CPn => "cpn",
            Family::HPn => "hpn",
            Family::Sn => "sn",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rpn" => Ok(Family::RPn),
            "cpn" => Ok(Family::CPn),
            "hpn" => Ok(Family::HPn),
            "sn" => Ok(Family::Sn),
            _ => Err(Error::format("family", format!("unknown family {s:?}; expected rpn, cpn, hpn or sn"))),
        }
    }
}

/// `QH(L) = Λ[a]/(a^B = q)` with `ν(q) = A_L = 1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossRing {
    pub family: Family,
    pub n: u32,
    /// Dimension `n_L`.
    pub dim: u32,
    /// Minimal Maslov number `N_L`.
    pub maslov: u32,
}

impl CrossRing {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::format("cross ring", "n must be at least 1"));
        }
        let (dim, maslov) = match family {
            Family::RPn => (n, n + 1),
            Family::CPn => (2 * n, 2 * n + 2),
            Family::HPn => (4 * n, 4 * n + 4),
            Family::Sn => (n, 2 * n),
        };
        Ok(CrossRing {
            family,
            n,
            dim,
            maslov,
        })
    }

    /// `c_L = n_L / N_L`.
    pub fn c(&self) -> Exponent {
        Exponent::new(self.dim as i64, self.maslov as i64)
    }

    /// `A_L = 1/2`.
    pub fn area(&self) -> Exponent {
        Exponent::new(1, 2)
    }

    /// `κ = A_L / N_L`.
    pub fn kappa(&self) -> Exponent {
        Exponent::new(1, 2 * self.maslov as i64)
    }

    /// Rank `B` of the power basis `a^0, …, a^{B−1}`: `n + 1`, or 2 for
    /// spheres.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::Sn => 2,
            _ => self.n as usize + 1,
        }
    }

    /// Codegree of `a`, `N_L / B`.
    pub fn generator_codegree(&self) -> u32 {
        self.maslov / self.rank() as u32
    }

    /// Power of `a` representing the point class.
    pub fn point_power(&self) -> usize {
        self.rank() - 1
    }
}

/// Filtration `l` on `QH(L)` with the power basis orthogonal and
/// `l(a^j) = c_j` for `0 ≤ j < B`, extended by `l(q x) = l(x) − A_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralFiltration {
    pub ring: CrossRing,
    pub values: Vec<Exponent>,
    /// Require `l(x) − l(a x) ≥ 0` on the power basis.
    pub nonneg_mode: bool,
}

impl SpectralFiltration {
    pub fn new(ring: CrossRing, values: Vec<Exponent>, nonneg_mode: bool) -> Result<Self> {
        if values.len() != ring.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} filtration values for a ring of rank {}",
                values.len(),
                ring.rank()
            )));
        }
        let f = SpectralFiltration {
            ring,
            values,
            nonneg_mode,
        };
        if nonneg_mode {
            for j in 0..f.ring.rank() {
                let step = &f.level(j) - &f.level(j + 1);
                if step.is_negative() {
                    return Err(Error::NonFiltered {
                        witness: format!("l(a^{j}) − l(a^{}) = {step} < 0", j + 1),
                    });
                }
            }
        }
        Ok(f)
    }

    /// All-zero filtration.
    pub fn zero(ring: CrossRing, nonneg_mode: bool) -> Self {
        let values = vec![Exponent::zero(); ring.rank()];
        SpectralFiltration {
            ring,
            values,
            nonneg_mode,
        }
    }

    /// `l(a^j)` for any `j ≥ 0`.
    pub fn level(&self, j: usize) -> Exponent {
        let b = self.ring.rank();
        &self.values[j % b] - &(&self.ring.area() * &Exponent::integer((j / b) as i64))
    }

    /// `l(a^j) − l(a^{j+k})` for `j = 0, …, B − 1`, unsorted.
    pub fn differences(&self, k: usize) -> Vec<Exponent> {
        (0..self.ring.rank())
            .map(|j| &self.level(j) - &self.level(j + k))
            .collect()
    }

    /// Matrix of multiplication by `a^k` on the power basis: `a^j ↦ q^s a^r`
    /// with `j + k = sB + r`, and `q = T^{A_L}`.
    pub fn multiplication_map(&self, k: usize) -> Result<FilteredMap> {
        let b = self.ring.rank();
        let mut m = Matrix::zeros(b, b);
        for j in 0..b {
            let (s, r) = ((j + k) / b, (j + k) % b);
            m.set(r, j, NovikovScalar::monomial(&self.ring.area() * &Exponent::integer(s as i64)));
        }
        let space = FilteredSpace::new(
            (0..b).map(|j| format!("a^{j}")).collect(),
            self.values.clone(),
        )?;
        FilteredMap::new(space.clone(), space, m)
    }
}

/// Spectral values of multiplication by `a^k`, sorted. Since it permutes the
/// orthogonal power basis up to powers of `q`, these are the differences
/// `l(a^j) − l(a^{j+k})`.
pub fn mult_spectrum(filtration: &SpectralFiltration, k: usize) -> Result<Vec<Exponent>> {
    let mut out = filtration.differences(k);
    out.sort();
    if filtration.nonneg_mode {
        if let Some(v) = out.first().filter(|v| v.is_negative()) {
            return Err(Error::NonFiltered {
                witness: format!("multiplication by a^{k} has spectral value {v}"),
            });
        }
    }
    Ok(out)
}

/// Same values from the generic decomposition of the explicit matrix.
pub fn mult_spectrum_by_decomposition(filtration: &SpectralFiltration, k: usize) -> Result<Vec<Exponent>> {
    let map = filtration.multiplication_map(k)?;
    if map.is_filtered() {
        map.spectral_values(None)
    } else {
        map.spectral_values_unfiltered(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOfUnityReport {
    /// The element is `a^power`, of codegree `k`.
    pub power: usize,
    pub m: usize,
    pub k: u32,
    pub spectrum: Vec<Exponent>,
    /// `(mk/N_L)·A_L`.
    pub telescoped: Exponent,
    pub bound_top: Exponent,
    pub bound_ceiling: Exponent,
    /// `β_B` and `β_{⌈B/m⌉}`.
    pub beta_top: Exponent,
    pub beta_ceiling: Exponent,
}

/// For an element `b = a^p` of codegree `k` with `b^m` a power of `q`,
/// verify the telescoping identity and the bounds
/// `β_B ≤ (mk/N_L)·A_L` and `β_{⌈B/m⌉} ≤ (k/N_L)·A_L`.
pub fn check_root_of_unity_bounds(filtration: &SpectralFiltration, m: usize, k: u32) -> Result<RootOfUnityReport> {
    let ring = &filtration.ring;
    let step = ring.generator_codegree();
    if m == 0 || k == 0 || k % step != 0 {
        return Err(Error::hypothesis(
            "element a^p of positive codegree k and m ≥ 1",
            format!("k = {k} is not a positive multiple of the codegree {step} of a (m = {m})"),
        ));
    }
    let p = (k / step) as usize;
    let b = ring.rank();
    if (p * m) % b != 0 {
        return Err(Error::hypothesis(
            "b^m is a power of q",
            format!("(a^{p})^{m} = a^{} and {b} does not divide it", p * m),
        ));
    }
    if !filtration.nonneg_mode {
        return Err(Error::hypothesis("nonnegative filtration steps", "nonneg_mode is off"));
    }
    let area = ring.area();
    let telescoped = &(&area * &Exponent::integer((m as i64) * k as i64)) * &Exponent::new(1, ring.maslov as i64);
    for j in 0..b {
        let sum = (0..m).fold(Exponent::zero(), |acc, i| {
            &acc + &(&filtration.level(j + i * p) - &filtration.level(j + (i + 1) * p))
        });
        if sum != telescoped {
            return Err(Error::assertion(
                "telescoping identity",
                format!("basis a^{j}: sum {sum} ≠ {telescoped}"),
            ));
        }
    }
    let spectrum = mult_spectrum(filtration, p)?;
    let bound_top = telescoped.clone();
    let bound_ceiling = &(&area * &Exponent::integer(k as i64)) * &Exponent::new(1, ring.maslov as i64);
    let beta_top = spectrum[b - 1].clone();
    let beta_ceiling = spectrum[b.div_ceil(m) - 1].clone();
    if beta_top > bound_top || beta_ceiling > bound_ceiling {
        return Err(Error::assertion(
            "root of unity bounds",
            format!("β_B = {beta_top} (bound {bound_top}), β_⌈B/m⌉ = {beta_ceiling} (bound {bound_ceiling})"),
        ));
    }
    Ok(RootOfUnityReport {
        power: p,
        m,
        k,
        spectrum,
        telescoped,
        bound_top,
        bound_ceiling,
        beta_top,
        beta_ceiling,
    })
}

/// `β_1` of multiplication by the point class; equal to the least
/// `l(x) − l([pt]·x)` over the power basis.
pub fn gamma_from_filtration(filtration: &SpectralFiltration) -> Result<Exponent> {
    let k = filtration.ring.point_power();
    let spectrum = mult_spectrum(filtration, k)?;
    let direct = filtration
        .differences(k)
        .into_iter()
        .min()
        .expect("rings have positive rank");
    if spectrum[0] != direct {
        return Err(Error::assertion("γ from filtration", format!("{} vs {direct}", spectrum[0])));
    }
    Ok(direct)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingConstants {
    pub c: Exponent,
    /// `(1+c)c / (2(1−c))`.
    pub gamma_bound: Exponent,
    /// `c / (2(1−c))`.
    pub beta_bound: Exponent,
    /// `(1+c)c / (1−c)`.
    pub ambient: Exponent,
    /// `(1−c)/(1+c)`.
    pub s_star: Exponent,
}

pub fn ring_constants(ring: &CrossRing) -> RingConstants {
    let c = ring.c();
    let one = Exponent::one();
    let two = Exponent::integer(2);
    let (plus, minus) = (&one + &c, &one - &c);
    let ambient = (&plus * &c).div(&minus);
    RingConstants {
        gamma_bound: ambient.div(&two),
        beta_bound: c.div(&(&two * &minus)),
        s_star: minus.div(&plus),
        ambient,
        c,
    }
}

/// `(Σ c_j)/(1 − max c_j) · (A_L + β)` for a product of rings with one common
/// minimal Maslov number.
pub fn product_bound(rings: &[CrossRing], beta: &Exponent) -> Result<Exponent> {
    let first = rings
        .first()
        .ok_or_else(|| Error::DimensionMismatch("product of zero rings".into()))?;
    if rings.iter().any(|r| r.maslov != first.maslov) {
        return Err(Error::MismatchedMaslov(rings.iter().map(|r| r.maslov).collect()));
    }
    if beta.is_negative() {
        return Err(Error::hypothesis("β ≥ 0", format!("β = {beta}")));
    }
    let sum = rings.iter().fold(Exponent::zero(), |acc, r| &acc + &r.c());
    let max = rings.iter().map(CrossRing::c).max().unwrap();
    Ok(&sum.div(&(&Exponent::one() - &max)) * &(&first.area() + beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    #[test]
    fn ring_invariants() {
        let s = CrossRing::new(Family::Sn, 1).unwrap();
        assert_eq!((s.dim, s.maslov, s.c(), s.kappa()), (1, 2, e(1, 2), e(1, 4)));
        let c = CrossRing::new(Family::CPn, 3).unwrap();
        assert_eq!(c.c(), e(3, 4));
        let h = CrossRing::new(Family::HPn, 2).unwrap();
        assert_eq!((h.dim, h.maslov, h.c()), (8, 12, e(2, 3)));
    }

    #[test]
    fn spectra() {
        let rp = CrossRing::new(Family::RPn, 3).unwrap();
        let z = SpectralFiltration::zero(rp, true);
        assert_eq!(mult_spectrum(&z, 3).unwrap(), vec![e(0, 1), e(1, 2), e(1, 2), e(1, 2)]);
        let s = SpectralFiltration::zero(CrossRing::new(Family::Sn, 1).unwrap(), true);
        assert_eq!(mult_spectrum(&s, 1).unwrap(), vec![e(0, 1), e(1, 2)]);
        assert_eq!(mult_spectrum_by_decomposition(&s, 1).unwrap(), vec![e(0, 1), e(1, 2)]);
    }

    #[test]
    fn gamma_and_guard() {
        let s1 = CrossRing::new(Family::Sn, 1).unwrap();
        let f = SpectralFiltration::new(s1.clone(), vec![e(0, 1), e(-1, 8)], true).unwrap();
        assert_eq!(gamma_from_filtration(&f).unwrap(), e(1, 8));
        assert!(matches!(
            SpectralFiltration::new(s1, vec![e(0, 1), e(1, 8)], true),
            Err(Error::NonFiltered { .. })
        ));
    }

    #[test]
    fn root_of_unity_example() {
        let s = SpectralFiltration::zero(CrossRing::new(Family::Sn, 1).unwrap(), true);
        let r = check_root_of_unity_bounds(&s, 2, 1).unwrap();
        assert_eq!((r.beta_top, r.bound_top), (e(1, 2), e(1, 2)));
        assert_eq!((r.beta_ceiling, r.bound_ceiling), (e(0, 1), e(1, 4)));
    }

    #[test]
    fn constants() {
        let k = ring_constants(&CrossRing::new(Family::Sn, 1).unwrap());
        assert_eq!((k.beta_bound, k.gamma_bound, k.ambient, k.s_star), (e(1, 2), e(3, 4), e(3, 2), e(1, 3)));
        let h = ring_constants(&CrossRing::new(Family::HPn, 2).unwrap());
        assert_eq!((h.beta_bound, h.gamma_bound, h.s_star), (e(1, 1), e(5, 3), e(1, 5)));
        let s1 = CrossRing::new(Family::Sn, 1).unwrap();
        assert_eq!(product_bound(&[s1.clone(), s1.clone()], &e(0, 1)).unwrap(), e(1, 1));
        let cp = CrossRing::new(Family::CPn, 1).unwrap();
        assert!(matches!(product_bound(&[s1, cp], &e(0, 1)), Err(Error::MismatchedMaslov(_))));
    }
}
