//! Truncated arithmetic in the universal Novikov field over the two-element
//! field.
//!
//! A [`NovikovScalar`] is a finite mod-2 sum of monomials `T^λ` with exact
//! rational exponents, together with a precision `Π`: the value is known
//! exactly at every exponent below `Π` and unknown at or above it. Exact
//! values (for instance everything read from an input file) carry `Π = +∞`.
//!
//! Precision propagates the way it does for p-adic numbers: sums are known
//! up to the smaller precision, and a product `x·y` is known up to
//! `min(Π_x + ν(y), Π_y + ν(x))`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact rational action value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Exponent(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn integer(value: i64) -> Self {
        Exponent(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero() -> Self {
        Exponent(BigRational::zero())
    }

    pub fn one() -> Self {
        Exponent(BigRational::one())
    }

    pub fn from_rational(value: BigRational) -> Self {
        Exponent(value)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Exponent(self.0.abs())
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Smallest integer not below `self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn div(&self, other: &Exponent) -> Exponent {
        Exponent(&self.0 / &other.0)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min_of<'a>(a: &'a Exponent, b: &'a Exponent) -> &'a Exponent {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `"p/q"` or an integer, with optional sign and surrounding blanks.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::format("rational literal", format!("cannot parse {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Exponent(BigRational::new(num, den)))
    }
}

impl From<i64> for Exponent {
    fn from(value: i64) -> Self {
        Exponent::integer(value)
    }
}

macro_rules! exponent_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Exponent> for &Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Exponent> for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: Exponent) -> Exponent {
                Exponent(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Exponent> for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent(self.0.$method(&rhs.0))
            }
        }
    };
}

exponent_binop!(Add, add);
exponent_binop!(Sub, sub);
exponent_binop!(Mul, mul);

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-&self.0)
    }
}

/// An exponent or `+∞`. Used both for valuations and for precisions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Valuation {
    Finite(Exponent),
    Infinite,
}

/// Precision bounds share the representation of valuations.
pub type Precision = Valuation;

impl Valuation {
    pub fn finite(&self) -> Option<&Exponent> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn add_exp(&self, e: &Exponent) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + e),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    pub fn plus(&self, other: &Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }

    pub fn min(self, other: Valuation) -> Valuation {
        std::cmp::min(self, other)
    }

    /// Is the exponent strictly below this bound?
    pub fn exceeds(&self, e: &Exponent) -> bool {
        match self {
            Valuation::Finite(v) => e < v,
            Valuation::Infinite => true,
        }
    }
}

impl From<Exponent> for Valuation {
    fn from(e: Exponent) -> Self {
        Valuation::Finite(e)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{e}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Element of the universal Novikov field over `F_2`, truncated at a precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NovikovScalar {
    /// Strictly increasing exponents with coefficient 1.
    terms: Vec<Exponent>,
    precision: Precision,
}

/// Sort and cancel repeated exponents in pairs (characteristic two).
fn cancel_mod_two(mut exps: Vec<Exponent>) -> Vec<Exponent> {
    exps.sort();
    let mut out: Vec<Exponent> = Vec::with_capacity(exps.len());
    for e in exps {
        if out.last() == Some(&e) {
            out.pop();
        } else {
            out.push(e);
        }
    }
    out
}

impl NovikovScalar {
    /// The exact zero.
    pub fn zero() -> Self {
        NovikovScalar {
            terms: Vec::new(),
            precision: Valuation::Infinite,
        }
    }

    /// Zero known only below `precision`.
    pub fn zero_to(precision: Precision) -> Self {
        NovikovScalar {
            terms: Vec::new(),
            precision,
        }
    }

    pub fn one() -> Self {
        Self::monomial(Exponent::zero())
    }

    /// The exact monomial `T^e`.
    pub fn monomial(e: Exponent) -> Self {
        NovikovScalar {
            terms: vec![e],
            precision: Valuation::Infinite,
        }
    }

    /// Exact sum of `T^e` over the given exponents, reduced mod 2.
    pub fn from_exponents<I: IntoIterator<Item = Exponent>>(exps: I) -> Self {
        NovikovScalar {
            terms: cancel_mod_two(exps.into_iter().collect()),
            precision: Valuation::Infinite,
        }
    }

    /// Parse a list of exponent literals, e.g. `["0", "3/2"]`.
    pub fn from_literals<S: AsRef<str>>(literals: &[S]) -> Result<Self> {
        let exps = literals
            .iter()
            .map(|s| s.as_ref().parse::<Exponent>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_exponents(exps))
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.truncate_in_place(&precision);
        self
    }

    pub fn terms(&self) -> &[Exponent] {
        &self.terms
    }

    pub fn precision(&self) -> &Precision {
        &self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_infinite()
    }

    /// `ν(x)`: the least exponent, `+∞` for zero.
    pub fn valuation(&self) -> Valuation {
        match self.terms.first() {
            Some(e) => Valuation::Finite(e.clone()),
            None => Valuation::Infinite,
        }
    }

    /// What is certainly known about `ν(x)`: the valuation if nonzero,
    /// otherwise the precision.
    pub fn valuation_lower_bound(&self) -> Valuation {
        match self.terms.first() {
            Some(e) => Valuation::Finite(e.clone()),
            None => self.precision.clone(),
        }
    }

    /// Largest exponent present, if any.
    pub fn max_exponent(&self) -> Option<&Exponent> {
        self.terms.last()
    }

    pub fn truncate(&self, precision: &Precision) -> Self {
        let mut out = self.clone();
        out.truncate_in_place(precision);
        out
    }

    fn truncate_in_place(&mut self, precision: &Precision) {
        if *precision < self.precision {
            self.precision = precision.clone();
        }
        if let Valuation::Finite(p) = &self.precision {
            let keep = self.terms.partition_point(|e| e < p);
            self.terms.truncate(keep);
        }
    }

    /// Multiply by `T^e`.
    pub fn shift(&self, e: &Exponent) -> Self {
        NovikovScalar {
            terms: self.terms.iter().map(|t| t + e).collect(),
            precision: self.precision.add_exp(e),
        }
    }

    /// Substitute `T ↦ T^s` for `s > 0`: every exponent and the precision
    /// are multiplied by `s`.
    pub fn rescale(&self, s: &Exponent) -> Self {
        assert!(s.is_positive(), "rescale factor must be positive");
        NovikovScalar {
            terms: self.terms.iter().map(|t| t * s).collect(),
            precision: match &self.precision {
                Valuation::Finite(p) => Valuation::Finite(p * s),
                Valuation::Infinite => Valuation::Infinite,
            },
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = std::cmp::min(&self.precision, &other.precision).clone();
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].cmp(&other.terms[j]) {
                Ordering::Less => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        let mut out = NovikovScalar { terms, precision };
        let p = out.precision.clone();
        out.truncate_in_place(&p);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let precision = std::cmp::min(
            self.precision.plus(&other.valuation_lower_bound()),
            other.precision.plus(&self.valuation_lower_bound()),
        );
        let mut exps = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let e = a + b;
                if precision.exceeds(&e) {
                    exps.push(e);
                }
            }
        }
        NovikovScalar {
            terms: cancel_mod_two(exps),
            precision,
        }
    }

    /// Inverse of a unit of the valuation ring, to this scalar's own
    /// precision.
    pub fn invert_unit(&self) -> Result<Self> {
        self.invert_unit_to(&Valuation::Infinite)
    }

    /// Inverse of a unit, computed to `min(precision, cap)`.
    ///
    /// Uses the characteristic-two Newton step `y ↦ x·y²`, which doubles the
    /// number of correct terms each round.
    pub fn invert_unit_to(&self, cap: &Precision) -> Result<Self> {
        if self.valuation() != Valuation::Finite(Exponent::zero()) {
            return Err(Error::NotAUnit {
                value: self.to_string(),
                valuation: self.valuation().to_string(),
            });
        }
        let target = std::cmp::min(&self.precision, cap).clone();
        if self.terms.len() == 1 {
            return Ok(NovikovScalar::one().with_precision(target));
        }
        if target.is_infinite() {
            return Err(Error::InfinitePrecision {
                value: self.to_string(),
            });
        }
        let x = self.truncate(&target);
        let one = NovikovScalar::one().with_precision(target.clone());
        let mut y = one.clone();
        loop {
            let check = x.mul(&y).truncate(&target);
            if check == one {
                return Ok(y.truncate(&target));
            }
            y = x.mul(&y.mul(&y)).truncate(&target);
        }
    }

    /// The quotient `q` with `x = q·pivot`, valid in the valuation ring when
    /// `ν(x) ≥ ν(pivot)`.
    pub fn divide_in_ring(&self, pivot: &Self) -> Result<Self> {
        let v = match pivot.valuation() {
            Valuation::Finite(v) => v,
            Valuation::Infinite => return Err(Error::DivisionByZero),
        };
        if self.valuation_lower_bound() < pivot.valuation() {
            return Err(Error::ValuationOrder {
                numerator: self.valuation().to_string(),
                pivot: v.to_string(),
            });
        }
        let neg = -&v;
        let x = self.shift(&neg);
        let unit = pivot.shift(&neg);
        if x.is_zero() {
            let precision = std::cmp::min(
                x.precision.clone(),
                unit.precision.plus(&x.precision),
            );
            return Ok(NovikovScalar::zero_to(precision));
        }
        let relative = match (&x.precision, x.valuation()) {
            (Valuation::Finite(p), Valuation::Finite(nu)) => Valuation::Finite(p - &nu),
            _ => Valuation::Infinite,
        };
        let inverse = unit.invert_unit_to(&relative)?;
        Ok(x.mul(&inverse))
    }

    /// Do the two scalars agree at every exponent below `bound`?
    pub fn agrees_below(&self, other: &Self, bound: &Exponent) -> bool {
        let b = Valuation::Finite(bound.clone());
        self.truncate(&b).terms == other.truncate(&b).terms
    }
}

impl Add for &NovikovScalar {
    type Output = NovikovScalar;
    fn add(self, rhs: &NovikovScalar) -> NovikovScalar {
        NovikovScalar::add(self, rhs)
    }
}

impl Mul for &NovikovScalar {
    type Output = NovikovScalar;
    fn mul(self, rhs: &NovikovScalar) -> NovikovScalar {
        NovikovScalar::mul(self, rhs)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &Exponent) -> fmt::Result {
    if e.is_integer() && !e.is_negative() {
        write!(f, "T^{e}")
    } else {
        write!(f, "T^{{{e}}}")
    }
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, e) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write_monomial(f, e)?;
        }
        Ok(())
    }
}

impl fmt::Debug for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if let Valuation::Finite(p) = &self.precision {
            write!(f, " @Π={p}")?;
        }
        Ok(())
    }
}

impl FromStr for NovikovScalar {
    type Err = Error;

    /// Parses the textual form `"T^0 + T^{3/2}"`; `"0"` is the empty sum and
    /// `"1"` and `"T"` are accepted for `T^0` and `T^1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(NovikovScalar::zero());
        }
        let mut exps = Vec::new();
        for raw in s.split('+') {
            let term = raw.trim();
            let exp = if term == "1" {
                Exponent::zero()
            } else if term == "T" {
                Exponent::one()
            } else if let Some(rest) = term.strip_prefix("T^") {
                let rest = rest.trim();
                let inner = rest
                    .strip_prefix('{')
                    .and_then(|r| r.strip_suffix('}'))
                    .unwrap_or(rest);
                inner.parse()?
            } else {
                return Err(Error::format(
                    "scalar",
                    format!("unrecognized term {term:?} in {s:?}"),
                ));
            };
            exps.push(exp);
        }
        Ok(NovikovScalar::from_exponents(exps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn s(text: &str) -> NovikovScalar {
        text.parse().unwrap()
    }

    fn fin(n: i64, d: i64) -> Valuation {
        Valuation::Finite(e(n, d))
    }

    #[test]
    fn add_cancels_mod_two() {
        assert_eq!(s("1 + T^1").add(&s("T^1 + T^2")), s("1 + T^2"));
        let x = s("T^{1/3} + T^5");
        assert!(x.add(&x).is_zero());
    }

    #[test]
    fn add_truncates_at_smaller_precision() {
        let a = NovikovScalar::one().with_precision(fin(3, 1));
        let b = s("T^5").with_precision(fin(10, 1));
        let sum = a.add(&b);
        assert_eq!(sum.terms(), NovikovScalar::one().terms());
        assert_eq!(sum.precision(), &fin(3, 1));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s("1 + T").mul(&s("1 + T")), s("1 + T^2"));
        assert_eq!(s("T^{1/2}").mul(&s("T^{1/3}")), s("T^{5/6}"));
        let z = NovikovScalar::zero().mul(&s("1 + T^{7/2}"));
        assert!(z.is_zero());
        assert!(z.precision().is_infinite());
    }

    #[test]
    fn mul_precision_rule() {
        let x = s("T^1 + T^2").with_precision(fin(4, 1));
        let y = s("T^{1/2}").with_precision(fin(3, 1));
        let p = x.mul(&y);
        // min(4 + 1/2, 3 + 1)
        assert_eq!(p.precision(), &fin(4, 1));
        assert_eq!(p, s("T^{3/2} + T^{5/2}").with_precision(fin(4, 1)));
        let zz = NovikovScalar::zero_to(fin(2, 1)).mul(&NovikovScalar::zero_to(fin(3, 1)));
        assert_eq!(zz.precision(), &fin(5, 1));
    }

    #[test]
    fn invert_unit_examples() {
        assert_eq!(NovikovScalar::one().invert_unit().unwrap(), NovikovScalar::one());
        let x = s("1 + T").with_precision(fin(3, 1));
        assert_eq!(
            x.invert_unit().unwrap(),
            s("1 + T + T^2").with_precision(fin(3, 1))
        );
        assert!(matches!(s("T").invert_unit(), Err(Error::NotAUnit { .. })));
        assert!(matches!(
            s("1 + T").invert_unit(),
            Err(Error::InfinitePrecision { .. })
        ));
    }

    #[test]
    fn divide_examples() {
        assert_eq!(s("T^2").divide_in_ring(&s("T^{1/2}")).unwrap(), s("T^{3/2}"));
        assert_eq!(s("T + T^2").divide_in_ring(&s("T")).unwrap(), s("1 + T"));
        assert!(matches!(
            s("1").divide_in_ring(&s("T")),
            Err(Error::ValuationOrder { .. })
        ));
        assert!(matches!(
            s("1").divide_in_ring(&NovikovScalar::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn divide_by_non_monomial_pivot() {
        let x = s("T^2").with_precision(fin(6, 1));
        let p = s("T + T^2");
        let q = x.divide_in_ring(&p).unwrap();
        // T^2 / (T(1+T)) = T (1 + T + T^2 + ...)
        assert_eq!(q.valuation(), fin(1, 1));
        let back = q.mul(&p);
        assert!(back.agrees_below(&x, &e(6, 1)));
    }

    #[test]
    fn text_round_trip() {
        for text in ["0", "T^0 + T^{3/2}", "T^{-1} + T^2", "T^{1/12}"] {
            assert_eq!(s(text).to_string(), text);
        }
        assert_eq!(s("1 + T"), s("T^0 + T^1"));
        assert!("T^x".parse::<NovikovScalar>().is_err());
        assert!("2".parse::<NovikovScalar>().is_err());
    }

    #[test]
    fn exponent_literals() {
        assert_eq!("3/2".parse::<Exponent>().unwrap(), e(3, 2));
        assert_eq!("-4".parse::<Exponent>().unwrap(), e(-4, 1));
        assert_eq!("6/4".parse::<Exponent>().unwrap().to_string(), "3/2");
        assert!("1/0".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
    }
}
