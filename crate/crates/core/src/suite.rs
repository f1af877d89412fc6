//! Seeded property runs over generated instances, shared by the command
//! line and the acceptance tests. Each run fans out over seeds with rayon and
//! reports results in seed order.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::barcode::{Bar, Barcode};
use crate::complex::FilteredComplex;
use crate::cone::{build_cone, check_deformation_basic, homology_map, suggest_sigma, DeformationCase};
use crate::cross::{
    check_root_of_unity_bounds, gamma_from_filtration, mult_spectrum, mult_spectrum_by_decomposition, CrossRing,
    Family, SpectralFiltration,
};
use crate::error::{Error, ErrorClass, Result};
use crate::novikov::{Exponent, Valuation};
use crate::persistence::{bottleneck, bottleneck_mod_shift, lsv_endpoint_count, pair_cost, deletion_cost, PeriodicBarcode};
use crate::random::{random_instance, ExponentPool, InstanceKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    /// Low/high separation of shifted cones at `σ*` and `2σ*`.
    Split,
    /// Deformation without a cone, both directions.
    Basic,
    /// Cone deformation, both cases.
    Deformation,
    /// Smith normal form, exchange route and normal form agree; certificates verify.
    Dual,
    /// Bottleneck against exhaustive matching, pseudometric axioms, shift quotient.
    Bottleneck,
    /// Periodic endpoint count against wide-range enumeration.
    Lsv,
    /// Root-of-unity bounds and multiplication spectra.
    Roots,
    /// Doubling the precision changes nothing below the original one.
    Precision,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Split,
        Property::Basic,
        Property::Deformation,
        Property::Dual,
        Property::Bottleneck,
        Property::Lsv,
        Property::Roots,
        Property::Precision,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Split => "split",
            Property::Basic => "basic",
            Property::Deformation => "deformation",
            Property::Dual => "dual",
            Property::Bottleneck => "bottleneck",
            Property::Lsv => "lsv",
            Property::Roots => "roots",
            Property::Precision => "precision",
        }
    }

    /// Check one seed; the count is the number of entries compared.
    pub fn check(self, seed: u64) -> Result<usize> {
        match self {
            Property::Split => check_split(seed),
            Property::Basic => check_basic(seed),
            Property::Deformation => check_deformation(seed),
            Property::Dual => check_dual(seed),
            Property::Bottleneck => check_bottleneck(seed),
            Property::Lsv => check_lsv(seed),
            Property::Roots => check_roots(seed),
            Property::Precision => check_precision(seed),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
                Error::format("--prop", format!("unknown property {s:?}; expected one of {names:?}"))
            })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteSummary {
    pub property: Property,
    pub seeds: std::ops::Range<u64>,
    pub passed: usize,
    /// Individual entries compared over the passing seeds.
    pub checks: usize,
    /// Passing seeds that compared nothing, e.g. no bar below the bound.
    pub vacuous: usize,
    pub hypothesis_failures: usize,
    pub assertion_failures: usize,
    pub input_failures: usize,
    /// The first few failures, in seed order.
    pub failures: Vec<(u64, String)>,
    pub elapsed: Duration,
}

impl SuiteSummary {
    pub fn instances(&self) -> usize {
        (self.seeds.end - self.seeds.start) as usize
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.instances()
    }
}

impl fmt::Display for SuiteSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} seeds passed ({} checks, {} vacuous), {} hypothesis, {} assertion, {} input failures",
            self.property,
            self.passed,
            self.instances(),
            self.checks,
            self.vacuous,
            self.hypothesis_failures,
            self.assertion_failures,
            self.input_failures
        )
    }
}

/// Run `property` on every seed in `seeds`.
pub fn run_suite(property: Property, seeds: std::ops::Range<u64>) -> SuiteSummary {
    let start = Instant::now();
    let results: Vec<(u64, Result<usize>)> = seeds
        .clone()
        .into_par_iter()
        .map(|seed| (seed, property.check(seed)))
        .collect();
    let mut s = SuiteSummary {
        property,
        seeds,
        passed: 0,
        checks: 0,
        vacuous: 0,
        hypothesis_failures: 0,
        assertion_failures: 0,
        input_failures: 0,
        failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (seed, r) in results {
        match r {
            Ok(n) => {
                s.passed += 1;
                s.checks += n;
                s.vacuous += usize::from(n == 0);
            }
            Err(e) => {
                match e.class() {
                    ErrorClass::Hypothesis => s.hypothesis_failures += 1,
                    ErrorClass::Assertion => s.assertion_failures += 1,
                    ErrorClass::Input => s.input_failures += 1,
                }
                if s.failures.len() < 10 {
                    s.failures.push((seed, e.to_string()));
                }
            }
        }
    }
    s.elapsed = start.elapsed();
    s
}

fn mismatch(what: &str, seed: u64, detail: String) -> Error {
    Error::assertion(what, format!("seed {seed}: {detail}"))
}

fn check_split(seed: u64) -> Result<usize> {
    let pool = ExponentPool::default();
    let r = random_instance(seed, 1 + (seed % 8) as usize, &pool, InstanceKind::Split)?;
    let known = r.known_lengths.clone().unwrap_or_default();
    let mut doubled: Vec<Exponent> = known.iter().chain(&known).cloned().collect();
    doubled.sort();
    let star = suggest_sigma(&r.base)?;
    let twice = &star + &star;
    let mut splits = Vec::new();
    for sigma in [&star, &twice] {
        let cone = build_cone(&r.base, &r.base, &r.map, sigma)?;
        let split = cone.split_spectrum(None)?;
        if split.low != doubled {
            return Err(mismatch("low part is the doubled spectrum", seed, format!("{:?} vs {doubled:?}", split.low)));
        }
        splits.push(split);
    }
    let compared: usize = splits.iter().map(|s| s.low.len() + s.high.len()).sum();
    let (a, b) = (&splits[0], &splits[1]);
    if a.high_minus_shift() != b.high_minus_shift() || a.low != b.low || a.infinite != b.infinite {
        return Err(mismatch("σ-stability", seed, format!("{a:?} vs {b:?}")));
    }
    Ok(compared)
}

fn check_basic(seed: u64) -> Result<usize> {
    let pool = ExponentPool::default();
    let r = random_instance(seed, 1 + (seed % 8) as usize, &pool, InstanceKind::Basic)?;
    let x = check_deformation_basic(&r.base0, &r.base, &r.big_a, None)?;
    let y = check_deformation_basic(&r.base, &r.base0, &r.big_a, None)?;
    if x.matched != y.matched {
        return Err(mismatch("symmetric agreement", seed, format!("{:?} vs {:?}", x.matched, y.matched)));
    }
    Ok(x.matched.len() + y.matched.len())
}

fn check_deformation(seed: u64) -> Result<usize> {
    let pool = ExponentPool::default();
    let dim = 1 + (seed % 6) as usize;
    let low = random_instance(seed, dim, &pool, InstanceKind::Low)?;
    let x = low.deformation().check(DeformationCase::Low, None, false)?;
    let high = random_instance(seed, dim, &pool, InstanceKind::High)?;
    let y = high.deformation().check(DeformationCase::High, None, false)?;
    Ok(x.verified + y.verified)
}

fn dual_agreement(c: &FilteredComplex, seed: u64) -> Result<usize> {
    let snf = c.spectrum_by_snf(None)?;
    let exchange = c.spectrum_by_exchange(None)?;
    if snf != exchange {
        return Err(mismatch("SNF and exchange spectra", seed, format!("{snf:?} vs {exchange:?}")));
    }
    let positive: Vec<Exponent> = snf.iter().filter(|v| v.is_positive()).cloned().collect();
    let lengths = c.length_spectrum(None)?;
    if positive != lengths.finite {
        return Err(mismatch("SNF and normal form", seed, format!("{positive:?} vs {:?}", lengths.finite)));
    }
    let map = c.as_map();
    let dec = map.uz_decompose(None)?;
    dec.certificate.verify(&map.orthonormalized()?)?;
    let mut values = dec.values();
    values.sort();
    if values != snf {
        return Err(mismatch("decomposition values", seed, format!("{values:?} vs {snf:?}")));
    }
    Ok(snf.len())
}

fn check_dual(seed: u64) -> Result<usize> {
    let pool = ExponentPool::default();
    let dim = 1 + (seed % 8) as usize;
    let kind = if seed % 2 == 0 { InstanceKind::Split } else { InstanceKind::Basic };
    let r = random_instance(seed, dim, &pool, kind)?;
    let compared = dual_agreement(&r.base0, seed)? + dual_agreement(&r.base, seed)?;
    if let Some(known) = &r.known_lengths {
        let got = r.base0.length_spectrum(None)?.finite;
        if &got != known {
            return Err(mismatch("constructed spectrum", seed, format!("{got:?} vs {known:?}")));
        }
    }
    Ok(compared)
}

fn random_barcode(rng: &mut ChaCha8Rng, bars: usize, allow_infinite: bool) -> Barcode {
    let mut b = Barcode::new();
    for _ in 0..bars {
        let birth = Exponent::new(rng.gen_range(-12..=24), 6);
        if allow_infinite && rng.gen_bool(0.2) {
            b.push(Bar::infinite(birth), 1);
        } else {
            b.push(Bar::finite(birth, Exponent::new(rng.gen_range(1..=24), 6)), 1);
        }
    }
    b
}

/// Exact bottleneck by enumerating every partial matching.
pub fn exhaustive_bottleneck(b1: &Barcode, b2: &Barcode) -> Valuation {
    let l: Vec<&Bar> = b1.bars().collect();
    let r: Vec<&Bar> = b2.bars().collect();
    fn go(i: usize, l: &[&Bar], r: &[&Bar], used: &mut Vec<bool>, acc: Valuation) -> Valuation {
        if i == l.len() {
            return r
                .iter()
                .zip(used.iter())
                .filter(|(_, u)| !**u)
                .map(|(b, _)| deletion_cost(b))
                .fold(acc, std::cmp::max);
        }
        let mut best = go(i + 1, l, r, used, std::cmp::max(acc.clone(), deletion_cost(l[i])));
        for j in 0..r.len() {
            if !used[j] {
                used[j] = true;
                let c = std::cmp::max(acc.clone(), pair_cost(l[i], r[j]));
                best = std::cmp::min(best, go(i + 1, l, r, used, c));
                used[j] = false;
            }
        }
        best
    }
    go(0, &l, &r, &mut vec![false; r.len()], Valuation::Finite(Exponent::zero()))
}

fn check_bottleneck(seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n1 = rng.gen_range(0..=6);
    let n2 = rng.gen_range(0..=6 - n1);
    let inf = seed % 3 == 0;
    let (b1, b2) = (random_barcode(&mut rng, n1, inf), random_barcode(&mut rng, n2, inf));
    let (d, m) = bottleneck(&b1, &b2);
    let oracle = exhaustive_bottleneck(&b1, &b2);
    if d != oracle {
        return Err(mismatch("bottleneck vs exhaustive matching", seed, format!("{d} vs {oracle}")));
    }
    if !m.is_valid_for(&b1, &b2) {
        return Err(mismatch("matching certificate", seed, format!("{m:?}")));
    }
    if bottleneck(&b2, &b1).0 != d {
        return Err(mismatch("symmetry", seed, String::new()));
    }
    let n3 = rng.gen_range(0..=4);
    let b3 = random_barcode(&mut rng, n3, inf);
    let (x, y) = (bottleneck(&b1, &b3).0, bottleneck(&b3, &b2).0);
    if d > x.plus(&y) {
        return Err(mismatch("triangle inequality", seed, format!("{d} > {x} + {y}")));
    }
    if bottleneck(&b1, &b1).0 != Valuation::Finite(Exponent::zero()) {
        return Err(mismatch("d(B, B) = 0", seed, String::new()));
    }
    // Shift quotient: no larger than the plain distance, and no shift on the
    // lattice of candidate shifts does better.
    let q = bottleneck_mod_shift(&b1, &b2);
    if q.distance > d {
        return Err(mismatch("shift quotient ≤ bottleneck", seed, format!("{} > {d}", q.distance)));
    }
    if let Valuation::Finite(best) = &q.distance {
        if bottleneck(&b1, &b2.shifted(&q.shift)).0 != q.distance {
            return Err(mismatch("reported optimal shift", seed, q.shift.to_string()));
        }
        // Candidate shifts are multiples of 1/12 in [−8, 8] here; scan that
        // range with step 1/24.
        for k in -192..=192 {
            let c = Exponent::new(k, 24);
            if let Valuation::Finite(v) = bottleneck(&b1, &b2.shifted(&c)).0 {
                if &v < best {
                    return Err(mismatch("shift grid scan", seed, format!("shift {c} gives {v} < {best}")));
                }
            }
        }
    }
    Ok(6)
}

/// Endpoints of `B_ℤ` in `[0, A)` by listing translates over a wide range of
/// indices.
pub fn enumerate_window_endpoints(p: &PeriodicBarcode) -> usize {
    let period = p.period_action();
    let zero = Exponent::zero();
    let mut count = 0;
    let reach = p
        .window
        .iter()
        .flat_map(|b| b.bars())
        .map(|b| {
            let far = b.death().unwrap_or_else(|| b.birth.clone());
            std::cmp::max(b.birth.abs(), far.abs())
        })
        .max()
        .unwrap_or_else(Exponent::zero);
    let j_max = reach.div(&period).ceil();
    let j_max: i64 = num_traits::ToPrimitive::to_i64(&j_max).unwrap() + 2;
    let cycle = p.period_index() as i64;
    for r in -j_max * cycle..(j_max + 1) * cycle {
        for bar in p.degree(r).bars() {
            for end in std::iter::once(bar.birth.clone()).chain(bar.death()) {
                if end >= zero && end < period {
                    count += 1;
                }
            }
        }
    }
    count
}

fn check_lsv(seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = rng.gen_range(1..=3);
    let kappa = Exponent::new(rng.gen_range(1..=6), 12);
    let window: Vec<Barcode> = (0..2 * half)
        .map(|_| {
            let mut b = Barcode::new();
            for _ in 0..rng.gen_range(0..=3) {
                let birth = Exponent::new(rng.gen_range(-36..=48), 12);
                if rng.gen_bool(0.25) {
                    b.push(Bar::infinite(birth), 1);
                } else {
                    b.push(Bar::finite(birth, Exponent::new(rng.gen_range(1..=60), 12)), 1);
                }
            }
            b
        })
        .collect();
    let p = PeriodicBarcode::new(window, kappa)?;
    let report = lsv_endpoint_count(&p)?;
    let direct = enumerate_window_endpoints(&p);
    if report.x_window != direct {
        return Err(mismatch("endpoints in [0, A)", seed, format!("{} vs {direct}", report.x_window)));
    }
    Ok(1)
}

/// Random filtration with nonnegative steps `l(a^j) − l(a^{j+1})`.
pub fn random_nonneg_filtration(rng: &mut ChaCha8Rng, ring: CrossRing) -> Result<SpectralFiltration> {
    let b = ring.rank();
    // Steps on the grid (1/24)ℤ summing to at most A_L = 12/24.
    let mut budget = 12;
    let mut values = vec![Exponent::new(rng.gen_range(-12..=12), 24)];
    for _ in 1..b {
        let step = rng.gen_range(0..=budget);
        budget -= step;
        let last = values.last().unwrap().clone();
        values.push(&last - &Exponent::new(step, 24));
    }
    SpectralFiltration::new(ring, values, true)
}

fn check_roots(seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = Family::ALL[(seed % 4) as usize];
    let n = 1 + ((seed / 4) % 4) as u32;
    let ring = CrossRing::new(family, n)?;
    let f = random_nonneg_filtration(&mut rng, ring.clone())?;
    let b = ring.rank();
    let mut checks = 0;
    for p in 1..=b {
        let m = b / gcd(p, b);
        let k = p as u32 * ring.generator_codegree();
        for mm in [m, 2 * m] {
            check_root_of_unity_bounds(&f, mm, k)?;
            checks += 1;
        }
        let closed = mult_spectrum(&f, p)?;
        let generic = mult_spectrum_by_decomposition(&f, p)?;
        if closed != generic {
            return Err(mismatch("closed-form vs decomposition", seed, format!("{closed:?} vs {generic:?}")));
        }
        checks += 1;
    }
    gamma_from_filtration(&f)?;
    Ok(checks + 1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn doubled(p: &Exponent) -> Exponent {
    p + p
}

fn check_precision(seed: u64) -> Result<usize> {
    let pool = ExponentPool::default();
    let mut checks = 0;
    for (kind, dim) in [
        (InstanceKind::Split, 1 + (seed % 8) as usize),
        (InstanceKind::Basic, 1 + (seed % 8) as usize),
        (InstanceKind::Low, 1 + (seed % 6) as usize),
        (InstanceKind::High, 1 + (seed % 6) as usize),
    ] {
        let r = random_instance(seed, dim, &pool, kind)?;
        let chain = kind != InstanceKind::Basic;
        for (c, map) in [(&r.base0, &r.map0), (&r.base, &r.map)] {
            let p = c.working_precision(None);
            let p2 = doubled(&p);
            let (x, y) = (c.barcode(Some(&p))?, c.barcode(Some(&p2))?);
            if x != y {
                return Err(mismatch("barcode under doubled precision", seed, format!("{x} vs {y}")));
            }
            let (u, v) = (c.spectrum_by_snf(Some(&p))?, c.spectrum_by_snf(Some(&p2))?);
            if u != v {
                return Err(mismatch("SNF values under doubled precision", seed, format!("{u:?} vs {v:?}")));
            }
            checks += 2;
            if chain {
                let h = homology_map(c, c, map, Some(&p))?;
                let h2 = homology_map(c, c, map, Some(&p2))?;
                // The matrix depends on the chosen homology basis; its
                // spectral values do not.
                let below = |v: Vec<Exponent>| -> Vec<Exponent> { v.into_iter().filter(|x| x < &p).collect() };
                let (s, s2) = (below(h.spectral_values(Some(&p))?), below(h2.spectral_values(Some(&p))?));
                if s != s2 {
                    return Err(mismatch("homology map values under doubled precision", seed, format!("{s:?} vs {s2:?}")));
                }
                checks += 1;
            }
        }
        let (d, d2) = (
            bottleneck(&r.base0.barcode(None)?, &r.base.barcode(None)?).0,
            bottleneck(
                &r.base0.barcode(Some(&doubled(&r.base0.working_precision(None))))?,
                &r.base.barcode(Some(&doubled(&r.base.working_precision(None))))?,
            )
            .0,
        );
        if d != d2 {
            return Err(mismatch("bottleneck under doubled precision", seed, format!("{d} vs {d2}")));
        }
        checks += 1;
        match kind {
            InstanceKind::Basic => {
                let x = check_deformation_basic(&r.base0, &r.base, &r.big_a, None)?;
                let p = std::cmp::max(r.base0.working_precision(None), r.base.working_precision(None));
                let y = check_deformation_basic(&r.base0, &r.base, &r.big_a, Some(&doubled(&std::cmp::max(p, r.big_a.clone()))))?;
                if x.matched != y.matched {
                    return Err(mismatch("basic deformation under doubled precision", seed, String::new()));
                }
                checks += 1;
            }
            _ => {
                let cone = build_cone(&r.base, &r.base, &r.map, &r.sigma)?;
                let p = cone.working_precision(None);
                let (x, y) = (cone.split_spectrum(Some(&p))?, cone.split_spectrum(Some(&doubled(&p)))?);
                if (&x.low, &x.high, x.infinite) != (&y.low, &y.high, y.infinite) {
                    return Err(mismatch("cone split under doubled precision", seed, format!("{x:?} vs {y:?}")));
                }
                checks += 1;
                let case = match kind {
                    InstanceKind::Low => Some(DeformationCase::Low),
                    InstanceKind::High => Some(DeformationCase::High),
                    _ => None,
                };
                if let Some(case) = case {
                    let def = r.deformation();
                    let x = def.check(case, None, false)?;
                    let y = def.check(case, Some(&doubled(&x.split.precision)), false)?;
                    if x.verified != y.verified || x.split.high != y.split.high || x.split0.low != y.split0.low {
                        return Err(mismatch("cone deformation under doubled precision", seed, String::new()));
                    }
                    checks += 1;
                }
            }
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_property_passes_a_few_seeds() {
        for p in Property::ALL {
            let s = run_suite(p, 0..8);
            assert!(s.all_passed(), "{s}: {:?}", s.failures);
        }
    }
}
