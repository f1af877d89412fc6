//! JSON documents for complexes, maps and barcodes.
//!
//! Rationals and exponents are strings (`"3/2"`, `"-1"`) so that nothing goes
//! through floating point. A complex document looks like
//!
//! ```json
//! {
//!   "precision": "10",
//!   "generators": [
//!     {"name": "y", "degree": 1, "filtration": "2"},
//!     {"name": "x", "degree": 0, "filtration": "1/2"}
//!   ],
//!   "differential": [{"from": "y", "to": "x", "coeff": ["0"]}],
//!   "maps": {"D": [{"from": "x", "to": "x", "coeff": ["0"]}]}
//! }
//! ```
//!
//! `coeff` lists the exponents of the mod-2 sum `Σ T^e`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::barcode::{Bar, Barcode};
use crate::complex::FilteredComplex;
use crate::error::{Error, Result};
use crate::filtered::FilteredSpace;
use crate::matrix::Matrix;
use crate::novikov::{Exponent, NovikovScalar, Valuation};
use crate::persistence::PeriodicBarcode;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<String>,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub differential: Vec<MatrixEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Vec<MatrixEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    pub filtration: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub from: String,
    pub to: String,
    pub coeff: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarcodeDocument {
    pub bars: Vec<BarEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarEntry {
    pub birth: String,
    /// Positive rational or `"inf"`.
    pub length: String,
    #[serde(default = "one")]
    pub multiplicity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
}

fn one() -> u32 {
    1
}

/// Window of a periodic barcode: `kappa` and the barcodes in degrees
/// `0 ≤ k < 2N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicDocument {
    pub kappa: String,
    pub window: Vec<BarcodeDocument>,
}

/// A complex together with the named maps of its document.
#[derive(Clone, Debug)]
pub struct ParsedComplex {
    pub complex: FilteredComplex,
    pub maps: BTreeMap<String, Matrix>,
}

impl ParsedComplex {
    pub fn map(&self, name: &str) -> Result<&Matrix> {
        self.maps.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.maps.keys().map(String::as_str).collect();
            Error::format(format!("maps.{name}"), format!("no such map; document has {known:?}"))
        })
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::format(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })
}

fn rational(text: &str, location: impl Fn() -> String) -> Result<Exponent> {
    text.trim()
        .parse()
        .map_err(|_| Error::format(location(), format!("{text:?} is not a rational literal")))
}

fn entries_to_matrix(space: &FilteredSpace, entries: &[MatrixEntry], field: &str) -> Result<Matrix> {
    let n = space.dim();
    let mut m = Matrix::zeros(n, n);
    let mut seen = std::collections::BTreeSet::new();
    for (k, entry) in entries.iter().enumerate() {
        let at = |what: &str| format!("{field}[{k}].{what}");
        let lookup = |name: &str, what: &str| {
            space
                .index_of(name)
                .ok_or_else(|| Error::format(at(what), format!("unknown generator {name:?}")))
        };
        let (j, i) = (lookup(&entry.from, "from")?, lookup(&entry.to, "to")?);
        if !seen.insert((i, j)) {
            return Err(Error::format(
                at("to"),
                format!("second entry for {} -> {}", entry.from, entry.to),
            ));
        }
        let exps = entry
            .coeff
            .iter()
            .enumerate()
            .map(|(t, e)| rational(e, || at(&format!("coeff[{t}]"))))
            .collect::<Result<Vec<_>>>()?;
        m.set(i, j, NovikovScalar::from_exponents(exps));
    }
    Ok(m)
}

fn matrix_to_entries(space: &FilteredSpace, m: &Matrix) -> Vec<MatrixEntry> {
    let mut out = Vec::new();
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let x = m.get(i, j);
            if !x.is_zero() {
                out.push(MatrixEntry {
                    from: space.name(j).to_string(),
                    to: space.name(i).to_string(),
                    coeff: x.terms().iter().map(|e| e.to_string()).collect(),
                });
            }
        }
    }
    out
}

impl ComplexDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Build the complex and its maps. The complex is not validated here.
    pub fn build(&self) -> Result<ParsedComplex> {
        let mut names = Vec::with_capacity(self.generators.len());
        let mut filtration = Vec::with_capacity(self.generators.len());
        for (k, g) in self.generators.iter().enumerate() {
            if names.contains(&g.name) {
                return Err(Error::format(
                    format!("generators[{k}].name"),
                    format!("duplicate generator name {:?}", g.name),
                ));
            }
            names.push(g.name.clone());
            filtration.push(rational(&g.filtration, || format!("generators[{k}].filtration"))?);
        }
        let degrees: Vec<Option<i64>> = self.generators.iter().map(|g| g.degree).collect();
        let mut space = FilteredSpace::new(names, filtration)?;
        if degrees.iter().any(Option::is_some) {
            let all = degrees
                .iter()
                .enumerate()
                .map(|(k, d)| {
                    d.ok_or_else(|| {
                        Error::format(format!("generators[{k}].degree"), "degrees must be given for all generators or none")
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            space = space.with_grading(all)?;
        }
        let d = entries_to_matrix(&space, &self.differential, "differential")?;
        let mut maps = BTreeMap::new();
        for (name, entries) in &self.maps {
            maps.insert(name.clone(), entries_to_matrix(&space, entries, &format!("maps.{name}"))?);
        }
        let mut complex = FilteredComplex::new(space, d)?;
        if let Some(p) = &self.precision {
            let p = rational(p, || "precision".to_string())?;
            if !p.is_positive() {
                return Err(Error::format("precision", "precision must be positive"));
            }
            complex = complex.with_precision(p);
        }
        Ok(ParsedComplex { complex, maps })
    }

    /// Document for a complex with exact entries, plus named maps.
    pub fn from_complex(c: &FilteredComplex, maps: &[(&str, &Matrix)]) -> Self {
        let space = c.space();
        ComplexDocument {
            precision: c.precision_override().map(|p| p.to_string()),
            generators: (0..space.dim())
                .map(|i| GeneratorEntry {
                    name: space.name(i).to_string(),
                    degree: space.degree(i),
                    filtration: space.level(i).to_string(),
                })
                .collect(),
            differential: matrix_to_entries(space, c.differential()),
            maps: maps
                .iter()
                .map(|(name, m)| (name.to_string(), matrix_to_entries(space, m)))
                .collect(),
        }
    }
}

impl BarcodeDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn build(&self) -> Result<Barcode> {
        barcode_from_entries(&self.bars, "bars")
    }

    pub fn from_barcode(b: &Barcode) -> Self {
        BarcodeDocument {
            bars: b
                .entries()
                .map(|(bar, m)| BarEntry {
                    birth: bar.birth.to_string(),
                    length: bar.length.to_string(),
                    multiplicity: m,
                    degree: bar.degree,
                })
                .collect(),
        }
    }
}

fn barcode_from_entries(entries: &[BarEntry], field: &str) -> Result<Barcode> {
    let mut out = Barcode::new();
    for (k, e) in entries.iter().enumerate() {
        let at = |what: &str| format!("{field}[{k}].{what}");
        let birth = rational(&e.birth, || at("birth"))?;
        let bar = if e.length.trim() == "inf" {
            Bar::infinite(birth)
        } else {
            let l = rational(&e.length, || at("length"))?;
            if !l.is_positive() {
                return Err(Error::format(at("length"), format!("bar lengths must be positive, got {l}")));
            }
            Bar::finite(birth, l)
        };
        out.push(bar.with_degree(e.degree), e.multiplicity);
    }
    Ok(out)
}

impl PeriodicDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn build(&self) -> Result<PeriodicBarcode> {
        let kappa = rational(&self.kappa, || "kappa".to_string())?;
        let window = self
            .window
            .iter()
            .enumerate()
            .map(|(k, d)| barcode_from_entries(&d.bars, &format!("window[{k}].bars")))
            .collect::<Result<Vec<_>>>()?;
        PeriodicBarcode::new(window, kappa)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::format(path.display().to_string(), e.to_string()))
}

pub fn read_complex(path: &Path) -> Result<ParsedComplex> {
    ComplexDocument::parse(&read(path)?)
        .and_then(|d| d.build())
        .map_err(|e| locate(path, e))
}

pub fn read_barcode(path: &Path) -> Result<Barcode> {
    BarcodeDocument::parse(&read(path)?)
        .and_then(|d| d.build())
        .map_err(|e| locate(path, e))
}

pub fn read_periodic(path: &Path) -> Result<PeriodicBarcode> {
    PeriodicDocument::parse(&read(path)?)
        .and_then(|d| d.build())
        .map_err(|e| locate(path, e))
}

/// Prefix format errors with the file name.
fn locate(path: &Path, e: Error) -> Error {
    match e {
        Error::Format { location, message } => Error::Format {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    }
}

/// Parse a valuation literal: a rational or `inf`.
pub fn parse_valuation(text: &str) -> Result<Valuation> {
    if text.trim() == "inf" {
        return Ok(Valuation::Infinite);
    }
    Ok(Valuation::Finite(rational(text, || "value".to_string())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = r#"{
        "generators": [
            {"name": "y", "filtration": "2"},
            {"name": "x", "filtration": "1/2"}
        ],
        "differential": [{"from": "y", "to": "x", "coeff": ["0"]}]
    }"#;

    #[test]
    fn two_generator_document() {
        let c = ComplexDocument::parse(TWO).unwrap().build().unwrap().complex;
        let b = c.barcode(None).unwrap();
        assert_eq!(b.to_string(), "[1/2, 2)");
    }

    #[test]
    fn round_trip() {
        let parsed = ComplexDocument::parse(TWO).unwrap().build().unwrap();
        let doc = ComplexDocument::from_complex(&parsed.complex, &[]);
        let again = ComplexDocument::parse(&doc.to_json()).unwrap().build().unwrap();
        assert_eq!(again.complex.barcode(None).unwrap(), parsed.complex.barcode(None).unwrap());
    }

    #[test]
    fn format_errors_point_at_fields() {
        let dup = TWO.replace("\"name\": \"x\"", "\"name\": \"y\"");
        let e = ComplexDocument::parse(&dup).unwrap().build().unwrap_err();
        assert!(matches!(&e, Error::Format { location, .. } if location == "generators[1].name"), "{e}");
        let bad = TWO.replace("\"1/2\"", "\"half\"");
        let e = ComplexDocument::parse(&bad).unwrap().build().unwrap_err();
        assert!(e.to_string().contains("generators[1].filtration"));
        let e = ComplexDocument::parse("{\"generators\": [}").unwrap_err();
        assert!(e.to_string().contains("line 1"));
    }

    #[test]
    fn barcode_document() {
        let doc = BarcodeDocument::parse(
            r#"{"bars": [{"birth": "0", "length": "inf"}, {"birth": "1/2", "length": "1", "multiplicity": 2}]}"#,
        )
        .unwrap();
        let b = doc.build().unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(BarcodeDocument::from_barcode(&b).build().unwrap(), b);
    }
}
