//! Bottleneck distances between barcodes, with and without a global shift,
//! and the endpoint count for periodic barcodes.
//!
//! Degree tags are ignored here; compare degree by degree through
//! [`Barcode::by_degree`] when needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::barcode::{Bar, BarLength, Barcode};
use crate::error::{Error, Result};
use crate::grid::common_denominator;
use crate::novikov::{Exponent, Valuation};

/// A partial bijection between the bars of two barcodes. Indices refer to
/// [`Barcode::bars`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_left: Vec<usize>,
    pub unmatched_right: Vec<usize>,
    pub delta: Valuation,
}

impl Matching {
    /// Whether this is a `δ`-matching of `left` and `right`: matched endpoints
    /// move by at most `δ`, unmatched bars have length at most `2δ`.
    pub fn is_valid_for(&self, left: &Barcode, right: &Barcode) -> bool {
        let (l, r): (Vec<&Bar>, Vec<&Bar>) = (left.bars().collect(), right.bars().collect());
        let mut seen_l = vec![false; l.len()];
        let mut seen_r = vec![false; r.len()];
        for &(i, j) in &self.pairs {
            if i >= l.len() || j >= r.len() || seen_l[i] || seen_r[j] {
                return false;
            }
            seen_l[i] = true;
            seen_r[j] = true;
            if pair_cost(l[i], r[j]) > self.delta {
                return false;
            }
        }
        for (bars, seen, unmatched) in [(&l, &mut seen_l, &self.unmatched_left), (&r, &mut seen_r, &self.unmatched_right)] {
            for &i in unmatched {
                if i >= bars.len() || seen[i] || deletion_cost(bars[i]) > self.delta {
                    return false;
                }
                seen[i] = true;
            }
            if seen.iter().any(|s| !s) {
                return false;
            }
        }
        true
    }
}

/// `max(|a − a′|, |b − b′|)`, or the birth difference for two infinite bars.
pub fn pair_cost(x: &Bar, y: &Bar) -> Valuation {
    match (x.death(), y.death()) {
        (Some(dx), Some(dy)) => Valuation::Finite(std::cmp::max(
            (&x.birth - &y.birth).abs(),
            (&dx - &dy).abs(),
        )),
        (None, None) => Valuation::Finite((&x.birth - &y.birth).abs()),
        _ => Valuation::Infinite,
    }
}

/// Half the length: the cost of leaving a bar unmatched.
pub fn deletion_cost(x: &Bar) -> Valuation {
    match &x.length {
        Valuation::Finite(l) => Valuation::Finite(l * &Exponent::new(1, 2)),
        Valuation::Infinite => Valuation::Infinite,
    }
}

/// Bars as integers after scaling by `4·lcm(denominators)`, so that
/// endpoint differences, their midpoints and half lengths are all integral.
struct Scaled {
    scale: i128,
    left: Vec<Ends>,
    right: Vec<Ends>,
}

#[derive(Clone, Copy)]
struct Ends {
    birth: i128,
    death: Option<i128>,
}

impl Scaled {
    fn new(b1: &Barcode, b2: &Barcode) -> Scaled {
        let exps: Vec<Exponent> = b1
            .bars()
            .chain(b2.bars())
            .flat_map(|b| std::iter::once(b.birth.clone()).chain(b.death()))
            .collect();
        let scale = 4 * common_denominator(exps.iter()) as i128;
        let conv = |e: &Exponent| -> i128 {
            let x = e * &Exponent::integer(scale as i64);
            x.numer().to_i128().expect("barcode endpoint out of range")
        };
        let ends = |b: &Barcode| -> Vec<Ends> {
            b.bars()
                .map(|bar| Ends {
                    birth: conv(&bar.birth),
                    death: bar.death().as_ref().map(conv),
                })
                .collect()
        };
        Scaled {
            scale,
            left: ends(b1),
            right: ends(b2),
        }
    }

    fn exponent(&self, k: i128) -> Exponent {
        Exponent::from_rational(BigRational::new(BigInt::from(k), BigInt::from(self.scale)))
    }
}

/// Optimal matching of the scaled bars with `right` shifted by `c`.
/// `None` if the numbers of infinite bars differ.
fn solve(left: &[Ends], right: &[Ends], c: i128) -> Option<(i128, Vec<(usize, usize)>)> {
    let split = |v: &[Ends]| -> (Vec<usize>, Vec<usize>) {
        (0..v.len()).partition(|&i| v[i].death.is_some())
    };
    let (lf, li) = split(left);
    let (rf, ri) = split(right);
    if li.len() != ri.len() {
        return None;
    }
    // Infinite bars: births matched in sorted order.
    let mut li = li;
    let mut ri = ri;
    li.sort_by_key(|&i| left[i].birth);
    ri.sort_by_key(|&j| right[j].birth);
    let mut pairs: Vec<(usize, usize)> = li.iter().copied().zip(ri.iter().copied()).collect();
    let mut delta = pairs
        .iter()
        .map(|&(i, j)| (left[i].birth - right[j].birth - c).abs())
        .max()
        .unwrap_or(0);
    let cost = |i: usize, j: usize| -> i128 {
        let (x, y) = (left[i], right[j]);
        std::cmp::max(
            (x.birth - y.birth - c).abs(),
            (x.death.unwrap() - y.death.unwrap() - c).abs(),
        )
    };
    let half = |e: Ends| (e.death.unwrap() - e.birth) / 2;
    let mut candidates: Vec<i128> = vec![0];
    candidates.extend(lf.iter().flat_map(|&i| rf.iter().map(move |&j| (i, j))).map(|(i, j)| cost(i, j)));
    candidates.extend(lf.iter().map(|&i| half(left[i])));
    candidates.extend(rf.iter().map(|&j| half(right[j])));
    candidates.sort_unstable();
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let feasible = |d: i128| finite_matching(&lf, &rf, d, &cost, &|i| half(left[i]), &|j| half(right[j]));
    let mut best = feasible(candidates[hi]).expect("largest candidate is always feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(candidates[mid]) {
            Some(m) => {
                hi = mid;
                best = m;
            }
            None => lo = mid + 1,
        }
    }
    delta = delta.max(candidates[lo]);
    pairs.extend(best);
    Some((delta, pairs))
}

/// Perfect matching of bars and diagonal copies at threshold `d`, by
/// augmenting paths. Returns the bar-to-bar pairs.
fn finite_matching(
    lf: &[usize],
    rf: &[usize],
    d: i128,
    cost: &dyn Fn(usize, usize) -> i128,
    half_l: &dyn Fn(usize) -> i128,
    half_r: &dyn Fn(usize) -> i128,
) -> Option<Vec<(usize, usize)>> {
    let (n1, n2) = (lf.len(), rf.len());
    // Left nodes: bars of `lf`, then diagonal copies of `rf`.
    // Right nodes: bars of `rf`, then diagonal copies of `lf`.
    let size = n1 + n2;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (a, &i) in lf.iter().enumerate() {
        for (b, &j) in rf.iter().enumerate() {
            if cost(i, j) <= d {
                adj[a].push(b);
            }
        }
        if half_l(i) <= d {
            adj[a].push(n2 + a);
        }
    }
    for (b, &j) in rf.iter().enumerate() {
        if half_r(j) <= d {
            adj[n1 + b].push(b);
        }
        adj[n1 + b].extend(n2..n2 + n1);
    }
    let mut owner: Vec<Option<usize>> = vec![None; size];
    for u in 0..size {
        let mut seen = vec![false; size];
        if !augment(u, &adj, &mut owner, &mut seen) {
            return None;
        }
    }
    Some(
        (0..n2)
            .filter_map(|b| owner[b].filter(|&a| a < n1).map(|a| (lf[a], rf[b])))
            .collect(),
    )
}

fn augment(u: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if owner[v].is_none_or(|w| augment(w, adj, owner, seen)) {
            owner[v] = Some(u);
            return true;
        }
    }
    false
}

fn matching_from(pairs: Vec<(usize, usize)>, n1: usize, n2: usize, delta: Valuation) -> Matching {
    let mut used_l = vec![false; n1];
    let mut used_r = vec![false; n2];
    for &(i, j) in &pairs {
        used_l[i] = true;
        used_r[j] = true;
    }
    let mut pairs = pairs;
    pairs.sort_unstable();
    Matching {
        pairs,
        unmatched_left: (0..n1).filter(|&i| !used_l[i]).collect(),
        unmatched_right: (0..n2).filter(|&j| !used_r[j]).collect(),
        delta,
    }
}

/// Least `δ` admitting a `δ`-matching, with a witness. The distance is
/// infinite when the numbers of infinite bars differ.
pub fn bottleneck(b1: &Barcode, b2: &Barcode) -> (Valuation, Matching) {
    let s = Scaled::new(b1, b2);
    match solve(&s.left, &s.right, 0) {
        Some((d, pairs)) => {
            let delta = Valuation::Finite(s.exponent(d));
            let m = matching_from(pairs, s.left.len(), s.right.len(), delta.clone());
            (delta, m)
        }
        None => (
            Valuation::Infinite,
            matching_from(Vec::new(), s.left.len(), s.right.len(), Valuation::Infinite),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedDistance {
    pub distance: Valuation,
    /// Optimal shift `c`, applied to the second barcode.
    pub shift: Exponent,
    /// Matching between the first barcode and the shifted second one.
    pub matching: Matching,
}

/// `inf_c d_bottle(B1, B2[c])`. The cost is piecewise linear in `c`, so the
/// infimum is attained at an endpoint difference, a midpoint of two such
/// differences, or a difference offset by half a bar length.
pub fn bottleneck_mod_shift(b1: &Barcode, b2: &Barcode) -> ShiftedDistance {
    let s = Scaled::new(b1, b2);
    let (n1, n2) = (s.left.len(), s.right.len());
    let mut diffs = Vec::new();
    for x in &s.left {
        for y in &s.right {
            diffs.push(x.birth - y.birth);
            if let (Some(a), Some(b)) = (x.death, y.death) {
                diffs.push(a - b);
            }
        }
    }
    diffs.sort_unstable();
    diffs.dedup();
    let halves: Vec<i128> = s
        .left
        .iter()
        .chain(&s.right)
        .filter_map(|e| e.death.map(|d| (d - e.birth) / 2))
        .collect();
    let mut candidates = vec![0];
    for (k, &x) in diffs.iter().enumerate() {
        candidates.push(x);
        candidates.extend(diffs[k + 1..].iter().map(|&y| (x + y) / 2));
        for &h in &halves {
            candidates.extend([x - h, x + h]);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let mut best: Option<(i128, i128, Vec<(usize, usize)>)> = None;
    for c in candidates {
        let Some((d, pairs)) = solve(&s.left, &s.right, c) else {
            return ShiftedDistance {
                distance: Valuation::Infinite,
                shift: Exponent::zero(),
                matching: matching_from(Vec::new(), n1, n2, Valuation::Infinite),
            };
        };
        // Prefer smaller distance, then the shift closest to zero.
        let better = best
            .as_ref()
            .is_none_or(|(bd, bc, _)| (d, c.abs(), c) < (*bd, bc.abs(), *bc));
        if better {
            best = Some((d, c, pairs));
        }
    }
    let (d, c, pairs) = best.expect("candidate set is never empty");
    let delta = Valuation::Finite(s.exponent(d));
    ShiftedDistance {
        distance: delta.clone(),
        shift: s.exponent(c),
        matching: matching_from(pairs, n1, n2, delta),
    }
}

/// Bar lengths with multiplicity, sorted, infinite ones last.
pub fn length_multiset(b: &Barcode) -> Vec<BarLength> {
    let mut out: Vec<BarLength> = b.bars().map(|x| x.length.clone()).collect();
    out.sort();
    out
}

/// Barcodes in degrees `0 ≤ k < 2N` of a `ℤ`-periodic family with
/// `B_{r−2N} = B_r[−A]` and `A = 2κN`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicBarcode {
    pub window: Vec<Barcode>,
    pub kappa: Exponent,
}

impl PeriodicBarcode {
    pub fn new(window: Vec<Barcode>, kappa: Exponent) -> Result<Self> {
        if window.is_empty() || window.len() % 2 != 0 {
            return Err(Error::format(
                "periodic barcode",
                format!("window must have even positive length 2N, got {}", window.len()),
            ));
        }
        if !kappa.is_positive() {
            return Err(Error::format("periodic barcode", format!("κ must be positive, got {kappa}")));
        }
        Ok(PeriodicBarcode { window, kappa })
    }

    /// `2N`.
    pub fn period_index(&self) -> usize {
        self.window.len()
    }

    /// `A = 2κN`.
    pub fn period_action(&self) -> Exponent {
        &self.kappa * &Exponent::integer(self.window.len() as i64)
    }

    /// `B_r` for any `r ∈ ℤ`.
    pub fn degree(&self, r: i64) -> Barcode {
        let p = self.window.len() as i64;
        let (j, k) = (r.div_euclid(p), r.rem_euclid(p));
        self.window[k as usize].shifted(&(&self.period_action() * &Exponent::integer(j)))
    }

    /// `⊔_k B_k[−kκ]`.
    pub fn assembled(&self) -> Barcode {
        let mut out = Barcode::new();
        for (k, b) in self.window.iter().enumerate() {
            out = out.union(&b.shifted(&-(&self.kappa * &Exponent::integer(k as i64))));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsvReport {
    /// Endpoints of the assembled barcode.
    pub x_total: usize,
    /// Endpoints of `B_ℤ` in `[0, A)`.
    pub x_window: usize,
    /// Lower endpoints in `[0, A)`: one per orbit.
    pub lower: usize,
    /// Upper endpoints in `[0, A)`: one per finite orbit.
    pub upper: usize,
    /// Finite orbits whose representative in `B₋` is not in `B₊`, and
    /// conversely. Both counts are finite orbits crossing a multiple of `A`.
    pub crossing_minus: usize,
    pub crossing_plus: usize,
    /// Finite orbits of length at least `A`; all of them cross.
    pub long_bars: usize,
}

/// The representative `b + jA` of a bar's orbit with `b + jA ∈ [0, A)`.
fn reduce(x: &Exponent, period: &Exponent) -> Exponent {
    let j = x.div(period).floor();
    x - &(period * &Exponent::from_rational(BigRational::from_integer(j)))
}

/// Count endpoints of the periodic barcode in `[0, A)` through its orbit
/// representatives, and compare with the endpoints of the assembled
/// barcode.
pub fn lsv_endpoint_count(p: &PeriodicBarcode) -> Result<LsvReport> {
    let period = p.period_action();
    let assembled = p.assembled();
    let x_total = assembled.bars().map(|b| if b.is_infinite() { 1 } else { 2 }).sum();
    let (mut lower, mut upper, mut minus, mut plus, mut long_bars) = (0, 0, 0, 0, 0);
    for window in &p.window {
        for bar in window.bars() {
            // B₋ representative: lower end in [0, A).
            let birth = reduce(&bar.birth, &period);
            lower += 1;
            let Some(length) = bar.length.finite() else { continue };
            upper += 1;
            if length >= &period {
                long_bars += 1;
            }
            if &birth + length >= period {
                minus += 1;
            }
            // B₊ representative: upper end in [0, A).
            let death = reduce(&(&bar.birth + length), &period);
            if (&death - length).is_negative() {
                plus += 1;
            }
        }
    }
    let report = LsvReport {
        x_total,
        x_window: lower + upper,
        lower,
        upper,
        crossing_minus: minus,
        crossing_plus: plus,
        long_bars,
    };
    if report.crossing_minus != report.crossing_plus
        || report.long_bars > report.crossing_minus
        || report.x_total != report.x_window
    {
        return Err(Error::assertion("endpoint count", format!("{report:?}")));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn bars(list: &[(Exponent, Exponent)]) -> Barcode {
        Barcode::from_bars(list.iter().map(|(b, l)| Bar::finite(b.clone(), l.clone())))
    }

    #[test]
    fn bottleneck_examples() {
        let b1 = bars(&[(e(0, 1), e(1, 1))]);
        let b2 = bars(&[(e(0, 1), e(2, 1))]);
        assert_eq!(bottleneck(&b1, &b1).0, Valuation::Finite(e(0, 1)));
        let (d, m) = bottleneck(&b1, &b2);
        assert_eq!(d, Valuation::Finite(e(1, 1)));
        assert!(m.is_valid_for(&b1, &b2));
        assert_eq!(bottleneck(&b1, &Barcode::new()).0, Valuation::Finite(e(1, 2)));
        let inf = Barcode::from_bars([Bar::infinite(e(0, 1))]);
        assert_eq!(bottleneck(&inf, &Barcode::new()).0, Valuation::Infinite);
    }

    #[test]
    fn shift_quotient_examples() {
        let b1 = bars(&[(e(0, 1), e(1, 1)), (e(3, 1), e(1, 2))]);
        assert_eq!(bottleneck_mod_shift(&b1, &b1.shifted(&e(7, 1))).distance, Valuation::Finite(e(0, 1)));
        let b2 = bars(&[(e(1, 2), e(1, 1))]);
        let one = bars(&[(e(0, 1), e(1, 1))]);
        assert_eq!(bottleneck_mod_shift(&one, &b2).distance, Valuation::Finite(e(0, 1)));
        // Shifting (0, 2) by −1/2 leaves both endpoints 1/2 away.
        let r = bottleneck_mod_shift(&one, &bars(&[(e(0, 1), e(2, 1))]));
        assert_eq!(r.distance, Valuation::Finite(e(1, 2)));
        assert_eq!(r.shift, e(-1, 2));
    }

    #[test]
    fn lengths() {
        let b = bars(&[(e(0, 1), e(1, 1)), (e(5, 1), e(1, 1))]);
        assert_eq!(length_multiset(&b), vec![Valuation::Finite(e(1, 1)); 2]);
        assert!(length_multiset(&Barcode::new()).is_empty());
    }

    #[test]
    fn lsv_small_cases() {
        let one = Barcode::from_bars([Bar::infinite(e(1, 3))]);
        let p = PeriodicBarcode::new(vec![one, Barcode::new()], e(1, 1)).unwrap();
        let r = lsv_endpoint_count(&p).unwrap();
        assert_eq!((r.x_total, r.x_window), (1, 1));
        let empty = PeriodicBarcode::new(vec![Barcode::new(); 4], e(1, 2)).unwrap();
        assert_eq!(lsv_endpoint_count(&empty).unwrap().x_total, 0);
    }
}
