use std::fmt;

use crate::error::{Error, Result};
use crate::novikov::{Exponent, NovikovScalar, Valuation};

/// Dense row-major matrix of Novikov scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<NovikovScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![NovikovScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, NovikovScalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> NovikovScalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    /// Build from rows of textual scalars, e.g. `[["1", "T"], ["0", "T^{1/2}"]]`.
    pub fn parse_rows(rows: &[&[&str]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for (j, text) in row.iter().enumerate() {
                m.set(i, j, text.parse()?);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NovikovScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: NovikovScalar) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &NovikovScalar)> {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, x)| (k / self.cols.max(1), k % self.cols.max(1), x))
    }

    pub fn column(&self, j: usize) -> Vec<NovikovScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(NovikovScalar::is_zero)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() && a.is_exact() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() && b.is_exact() {
                        continue;
                    }
                    let sum = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, sum);
                }
            }
        }
        Ok(out)
    }

    /// Apply `f` to every entry.
    pub fn map(&self, f: impl Fn(&NovikovScalar) -> NovikovScalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Multiply every entry by `T^e`.
    pub fn shift(&self, e: &Exponent) -> Matrix {
        self.map(|x| x.shift(e))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("block shapes do not fit".into()));
        }
        let (r, cl) = (a.rows + c.rows, a.cols + b.cols);
        Ok(Matrix::from_fn(r, cl, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j),
                (true, false) => b.get(i, j - a.cols),
                (false, true) => c.get(i - a.rows, j),
                (false, false) => d.get(i - a.rows, j - a.cols),
            }
            .clone()
        }))
    }

    /// Least valuation over all entries (`+∞` for the zero matrix).
    pub fn min_valuation(&self) -> Valuation {
        self.entries
            .iter()
            .map(NovikovScalar::valuation)
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Largest exponent appearing in any entry.
    pub fn max_exponent(&self) -> Option<Exponent> {
        self.entries
            .iter()
            .filter_map(|x| x.max_exponent().cloned())
            .max()
    }

    /// Smallest precision of any entry.
    pub fn min_precision(&self) -> Valuation {
        self.entries
            .iter()
            .map(|x| x.precision().clone())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn truncate(&self, precision: &Valuation) -> Matrix {
        self.map(|x| x.truncate(precision))
    }

    /// Entrywise agreement at every exponent below `bound`.
    pub fn agrees_below(&self, other: &Matrix, bound: &Exponent) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.agrees_below(b, bound))
    }

    /// Every exponent appearing anywhere in the matrix.
    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.entries.iter().flat_map(|x| x.terms().iter())
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let a = Matrix::parse_rows(&[&["1", "T"], &["0", "1 + T"]]).unwrap();
        assert_eq!(a.mul(&Matrix::identity(2)).unwrap(), a);
        let sq = a.mul(&a).unwrap();
        // [[1, T + T(1+T)], [0, (1+T)^2]]
        assert_eq!(sq, Matrix::parse_rows(&[&["1", "T^2"], &["0", "1 + T^2"]]).unwrap());
        assert!(a.mul(&Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn block_assembly() {
        let one = Matrix::identity(1);
        let z = Matrix::zeros(1, 1);
        let b = Matrix::block(&one, &z, &z, &one).unwrap();
        assert_eq!(b, Matrix::identity(2));
        assert_eq!(b.min_valuation(), Valuation::Finite(Exponent::zero()));
        assert_eq!(Matrix::zeros(2, 2).min_valuation(), Valuation::Infinite);
    }
}
