use std::collections::BTreeMap;
use std::fmt;

use crate::novikov::{Exponent, Valuation};

/// Length of a bar: positive rational or `+∞`.
pub type BarLength = Valuation;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub birth: Exponent,
    pub length: BarLength,
    pub degree: Option<i64>,
}

impl Bar {
    pub fn finite(birth: Exponent, length: Exponent) -> Self {
        Bar {
            birth,
            length: Valuation::Finite(length),
            degree: None,
        }
    }

    pub fn infinite(birth: Exponent) -> Self {
        Bar {
            birth,
            length: Valuation::Infinite,
            degree: None,
        }
    }

    pub fn with_degree(mut self, degree: Option<i64>) -> Self {
        self.degree = degree;
        self
    }

    pub fn is_infinite(&self) -> bool {
        self.length.is_infinite()
    }

    /// `birth + length`, `None` for infinite bars.
    pub fn death(&self) -> Option<Exponent> {
        self.length.finite().map(|l| &self.birth + l)
    }

    pub fn shifted(&self, c: &Exponent) -> Bar {
        Bar {
            birth: &self.birth + c,
            length: self.length.clone(),
            degree: self.degree,
        }
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.length {
            Valuation::Finite(l) => write!(f, "[{}, {})", self.birth, &self.birth + l)?,
            Valuation::Infinite => write!(f, "[{}, inf)", self.birth)?,
        }
        if let Some(d) = self.degree {
            write!(f, " deg {d}")?;
        }
        Ok(())
    }
}

/// A multiset of bars, kept sorted with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    bars: BTreeMap<Bar, u32>,
}

impl Barcode {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bars<I: IntoIterator<Item = Bar>>(bars: I) -> Self {
        let mut b = Barcode::new();
        for bar in bars {
            b.push(bar, 1);
        }
        b
    }

    /// Add `multiplicity` copies of a bar. Panics on non-positive finite
    /// lengths.
    pub fn push(&mut self, bar: Bar, multiplicity: u32) {
        if let Valuation::Finite(l) = &bar.length {
            assert!(l.is_positive(), "bar lengths must be positive, got {l}");
        }
        if multiplicity > 0 {
            *self.bars.entry(bar).or_insert(0) += multiplicity;
        }
    }

    /// Distinct bars with their multiplicities.
    pub fn entries(&self) -> impl Iterator<Item = (&Bar, u32)> {
        self.bars.iter().map(|(b, &m)| (b, m))
    }

    /// Every bar, repeated according to multiplicity.
    pub fn bars(&self) -> impl Iterator<Item = &Bar> {
        self.bars
            .iter()
            .flat_map(|(b, &m)| std::iter::repeat_n(b, m as usize))
    }

    pub fn len(&self) -> usize {
        self.bars.values().map(|&m| m as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn infinite_count(&self) -> usize {
        self.bars().filter(|b| b.is_infinite()).count()
    }

    pub fn finite_count(&self) -> usize {
        self.len() - self.infinite_count()
    }

    /// Finite lengths, sorted increasingly.
    pub fn finite_lengths(&self) -> Vec<Exponent> {
        let mut out: Vec<Exponent> = self.bars().filter_map(|b| b.length.finite().cloned()).collect();
        out.sort();
        out
    }

    pub fn length_spectrum(&self) -> LengthSpectrum {
        LengthSpectrum {
            finite: self.finite_lengths(),
            infinite: self.infinite_count(),
        }
    }

    /// Every birth moved by `c`.
    pub fn shifted(&self, c: &Exponent) -> Barcode {
        let mut out = Barcode::new();
        for (b, m) in self.entries() {
            out.push(b.shifted(c), m);
        }
        out
    }

    /// Births and lengths multiplied by `s > 0`.
    pub fn scaled(&self, s: &Exponent) -> Barcode {
        let mut out = Barcode::new();
        for (b, m) in self.entries() {
            let length = match &b.length {
                Valuation::Finite(l) => Valuation::Finite(l * s),
                Valuation::Infinite => Valuation::Infinite,
            };
            out.push(
                Bar {
                    birth: &b.birth * s,
                    length,
                    degree: b.degree,
                },
                m,
            );
        }
        out
    }

    /// Same bars with degree tags removed.
    pub fn pooled(&self) -> Barcode {
        Barcode::from_bars(self.bars().map(|b| b.clone().with_degree(None)))
    }

    /// Split by degree tag.
    pub fn by_degree(&self) -> BTreeMap<Option<i64>, Barcode> {
        let mut out: BTreeMap<Option<i64>, Barcode> = BTreeMap::new();
        for (b, m) in self.entries() {
            out.entry(b.degree).or_default().push(b.clone(), m);
        }
        out
    }

    /// Multiset union.
    pub fn union(&self, other: &Barcode) -> Barcode {
        let mut out = self.clone();
        for (b, m) in other.entries() {
            out.push(b.clone(), m);
        }
        out
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "(empty)");
        }
        let parts: Vec<String> = self
            .entries()
            .map(|(b, m)| if m == 1 { b.to_string() } else { format!("{b} x{m}") })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Sorted finite bar lengths together with the number of infinite bars.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LengthSpectrum {
    pub finite: Vec<Exponent>,
    pub infinite: usize,
}

impl LengthSpectrum {
    pub fn new(mut finite: Vec<Exponent>, infinite: usize) -> Self {
        finite.sort();
        LengthSpectrum { finite, infinite }
    }

    /// Entries strictly below `bound`.
    pub fn below(&self, bound: &Exponent) -> Vec<Exponent> {
        self.finite.iter().filter(|l| *l < bound).cloned().collect()
    }

    /// The `k`-th entry, counting from 1.
    pub fn beta(&self, k: usize) -> Option<&Exponent> {
        k.checked_sub(1).and_then(|i| self.finite.get(i))
    }

    pub fn max(&self) -> Option<&Exponent> {
        self.finite.last()
    }
}

impl fmt::Display for LengthSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.finite.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}} + {} infinite", parts.join(", "), self.infinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicities_merge() {
        let b = Barcode::from_bars([
            Bar::finite(Exponent::zero(), Exponent::one()),
            Bar::finite(Exponent::zero(), Exponent::one()),
            Bar::infinite(Exponent::integer(2)),
        ]);
        assert_eq!(b.len(), 3);
        assert_eq!(b.entries().count(), 2);
        assert_eq!(b.length_spectrum(), LengthSpectrum::new(vec![Exponent::one(); 2], 1));
        assert_eq!(b.to_string(), "[0, 1) x2, [2, inf)");
    }
}
