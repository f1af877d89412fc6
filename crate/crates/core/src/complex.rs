//! Filtered chain complexes over the Novikov field and their barcodes.

use std::fmt;

use crate::barcode::{Bar, Barcode, LengthSpectrum};
use crate::error::{Error, Result};
use crate::filtered::{
    exchange_levels, from_grid_matrix, grid_setup, grid_snf, orthonormalized_matrix,
    to_grid_matrix, FilteredMap, FilteredSpace,
};
use crate::grid::{Grid, GridMatrix};
use crate::matrix::Matrix;
use crate::novikov::{Exponent, NovikovScalar, Valuation};

/// A finite filtered complex: a filtered space with a differential whose
/// columns are the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    space: FilteredSpace,
    differential: Matrix,
    precision: Option<Exponent>,
}

/// One canceling pair of the normal form: `d ζ = η` with `A(ζ) − A(η)` equal
/// to `length`. Indices refer to basis slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalPair {
    pub eta: usize,
    pub zeta: usize,
    pub length: Exponent,
}

/// Normal form of a differential: an orthogonal basis made of canceling
/// pairs and homology generators.
#[derive(Clone, Debug)]
pub struct NormalForm {
    /// In elimination order, including zero-length pairs.
    pub pairs: Vec<NormalPair>,
    /// Slots of the homology generators `ξ`.
    pub homology: Vec<usize>,
    /// Lengths are exact below this bound; a pair longer than it would show
    /// up as two homology generators.
    pub precision: Exponent,
    /// Basis vector of each slot in the original generators, scaled so that
    /// its filtration is the slot's level (see [`NormalForm::level`]).
    pub vectors: Vec<Vec<NovikovScalar>>,
    levels: Vec<Exponent>,
}

impl NormalForm {
    /// Filtration level of the basis vector in `slot`.
    pub fn level(&self, slot: usize) -> &Exponent {
        &self.levels[slot]
    }

    pub fn null_pairs(&self) -> impl Iterator<Item = &NormalPair> {
        self.pairs.iter().filter(|p| p.length.is_zero())
    }
}

/// Result of [`FilteredComplex::validate`]. Every list holds human-readable
/// witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub dim: usize,
    pub d_squared: Vec<String>,
    pub filtration: Vec<String>,
    pub grading: Vec<String>,
    /// Generators with `A(dx) = A(x)`; allowed, but worth knowing.
    pub non_strict: Vec<String>,
    /// Zero-length canceling pairs `(η, ζ)`, by generator name of the slot.
    pub null_pairs: Vec<(String, String)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.d_squared.is_empty() && self.filtration.is_empty() && self.grading.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.is_valid() {
            return format!("valid complex of dimension {}", self.dim);
        }
        let mut parts = Vec::new();
        for (label, list) in [
            ("d² ≠ 0", &self.d_squared),
            ("filtration", &self.filtration),
            ("grading", &self.grading),
        ] {
            if let Some(first) = list.first() {
                parts.push(format!("{label}: {first} ({} total)", list.len()));
            }
        }
        parts.join("; ")
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for (label, list) in [
            ("d_squared", &self.d_squared),
            ("filtration", &self.filtration),
            ("grading", &self.grading),
            ("non_strict", &self.non_strict),
        ] {
            for w in list {
                writeln!(f, "  {label}: {w}")?;
            }
        }
        for (eta, zeta) in &self.null_pairs {
            writeln!(f, "  null_pair: d {zeta} ~ {eta}")?;
        }
        Ok(())
    }
}

/// Normal form computed in the grid engine.
pub(crate) struct GridNormalForm {
    pub grid: Grid,
    /// Orthonormalized differential.
    pub dbar: GridMatrix,
    /// `(η slot, ζ slot, length in units)` in elimination order.
    pub pairs: Vec<(usize, usize, usize)>,
    pub homology: Vec<usize>,
    /// Columns are the new orthonormal basis vectors.
    pub basis: GridMatrix,
    pub basis_inv: GridMatrix,
}

/// Running conjugation `M ↦ E⁻¹ M E` with the basis `B ↦ B E` tracked.
struct Conjugation<'a> {
    grid: &'a Grid,
    m: GridMatrix,
    b: GridMatrix,
    b_inv: GridMatrix,
}

impl Conjugation<'_> {
    /// `b_dst ← b_dst + f·b_src`.
    fn add_basis(&mut self, src: usize, dst: usize, f: &[u64]) {
        let g = self.grid;
        self.m.col_axpy(g, dst, src, f);
        self.m.row_axpy(g, src, dst, f);
        self.b.col_axpy(g, dst, src, f);
        self.b_inv.row_axpy(g, src, dst, f);
    }

    /// `b_k ← u·b_k` for a unit `u`.
    fn scale_basis(&mut self, k: usize, u: &[u64]) {
        let g = self.grid;
        let inv = g.inv_unit(u);
        self.m.col_scale(g, k, u);
        self.m.row_scale(g, k, &inv);
        self.b.col_scale(g, k, u);
        self.b_inv.row_scale(g, k, &inv);
    }
}

/// Bring an orthonormalized differential to normal form by conjugation.
///
/// Each round pivots on an off-diagonal entry `(r, c)` of least valuation
/// `v`, rescales so that it is exactly `T^v`, clears the rest of column `c`
/// and row `r`, and retires slots `r` (η) and `c` (ζ). Because the pivot has
/// least valuation, every elementary step is exact modulo `T^Π`.
pub(crate) fn grid_normal_form(grid: &Grid, dbar: &GridMatrix) -> Result<GridNormalForm> {
    let n = dbar.rows;
    let mut cj = Conjugation {
        grid,
        m: dbar.clone(),
        b: GridMatrix::identity(grid, n),
        b_inv: GridMatrix::identity(grid, n),
    };
    let mut active: Vec<usize> = (0..n).collect();
    let mut pairs = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        let mut best_diag: Option<usize> = None;
        for &i in &active {
            for &j in &active {
                let Some(v) = Grid::valuation(cj.m.get(i, j)) else { continue };
                if i == j {
                    best_diag = Some(best_diag.map_or(v, |d| d.min(v)));
                } else if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, r, c)) = best else {
            if let Some(dv) = best_diag {
                return Err(precision_exhausted(grid, dv, "only diagonal entries remain"));
            }
            break;
        };
        if best_diag.is_some_and(|dv| dv < v) {
            return Err(precision_exhausted(grid, v, "a diagonal entry has least valuation"));
        }
        let unit = grid.shift_down(cj.m.get(r, c), v);
        if Grid::popcount(&unit) != 1 {
            cj.scale_basis(r, &unit);
        }
        for &i in &active {
            if i == r || Grid::is_zero(cj.m.get(i, c)) {
                continue;
            }
            let f = grid.shift_down(cj.m.get(i, c), v);
            cj.add_basis(i, r, &f);
        }
        for &j in &active {
            if j == c || Grid::is_zero(cj.m.get(r, j)) {
                continue;
            }
            let g = grid.shift_down(cj.m.get(r, j), v);
            cj.add_basis(c, j, &g);
        }
        for &k in &active {
            let stray = (k != r && !Grid::is_zero(cj.m.get(k, c)))
                || (k != c && !Grid::is_zero(cj.m.get(r, k)))
                || !Grid::is_zero(cj.m.get(k, r))
                || !Grid::is_zero(cj.m.get(c, k));
            if stray {
                return Err(Error::assertion(
                    "normal form",
                    format!("pair ({r}, {c}) did not split off; is d² = 0?"),
                ));
            }
        }
        active.retain(|&k| k != r && k != c);
        pairs.push((r, c, v));
    }
    Ok(GridNormalForm {
        grid: grid.clone(),
        dbar: dbar.clone(),
        pairs,
        homology: active,
        basis: cj.b,
        basis_inv: cj.b_inv,
    })
}

fn precision_exhausted(grid: &Grid, units: usize, what: &str) -> Error {
    Error::PrecisionExhausted {
        precision: grid.precision().to_string(),
        detail: format!("{what} (valuation {})", grid.units_to_exponent(units as i64)),
    }
}

impl FilteredComplex {
    pub fn new(space: FilteredSpace, differential: Matrix) -> Result<Self> {
        let n = space.dim();
        if differential.rows() != n || differential.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "differential is {}x{} on a space of dimension {n}",
                differential.rows(),
                differential.cols()
            )));
        }
        Ok(FilteredComplex {
            space,
            differential,
            precision: None,
        })
    }

    pub fn empty() -> Self {
        FilteredComplex {
            space: FilteredSpace::anonymous(Vec::new()),
            differential: Matrix::zeros(0, 0),
            precision: None,
        }
    }

    /// Fix the working precision used when none is passed explicitly.
    pub fn with_precision(mut self, precision: Exponent) -> Self {
        self.precision = Some(precision);
        self
    }

    pub fn precision_override(&self) -> Option<&Exponent> {
        self.precision.as_ref()
    }

    pub fn space(&self) -> &FilteredSpace {
        &self.space
    }

    pub fn differential(&self) -> &Matrix {
        &self.differential
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn as_map(&self) -> FilteredMap {
        FilteredMap {
            source: self.space.clone(),
            target: self.space.clone(),
            matrix: self.differential.clone(),
        }
    }

    pub fn orthonormalized(&self) -> Result<Matrix> {
        let a = self.space.filtration();
        orthonormalized_matrix(a, a, &self.differential)
    }

    /// Default working precision `r·E + 1`, where `E` is the largest exponent
    /// of the orthonormalized differential and `r = max(1, ⌊dim/2⌋)` bounds
    /// its rank. A bar length is one Smith value, so it is at most the
    /// valuation of an `r × r` minor, hence at most `r·E`.
    pub fn default_precision(&self) -> Exponent {
        let e = self
            .orthonormalized()
            .ok()
            .and_then(|m| m.max_exponent())
            .unwrap_or_else(Exponent::zero);
        let r = (self.dim() / 2).max(1) as i64;
        &(&Exponent::integer(r) * &e) + &Exponent::one()
    }

    pub fn working_precision(&self, requested: Option<&Exponent>) -> Exponent {
        requested
            .or(self.precision.as_ref())
            .cloned()
            .unwrap_or_else(|| self.default_precision())
    }

    pub(crate) fn prepare(
        &self,
        precision: Option<&Exponent>,
        extra: &[Exponent],
    ) -> Result<(Grid, GridMatrix)> {
        let bar = self.orthonormalized()?;
        grid_setup(&bar, &self.working_precision(precision), extra)
    }

    pub(crate) fn grid_normal_form(
        &self,
        precision: Option<&Exponent>,
        extra: &[Exponent],
    ) -> Result<GridNormalForm> {
        let (grid, dbar) = self.prepare(precision, extra)?;
        grid_normal_form(&grid, &dbar)
    }

    /// Check `d² = 0`, filtration non-increase and degree −1, with witnesses.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let a = self.space.filtration();
        let name = |i: usize| self.space.name(i).to_string();
        let mut report = ValidationReport {
            dim: n,
            ..Default::default()
        };
        for (i, j, x) in self.differential.entries() {
            let Valuation::Finite(nu) = x.valuation() else { continue };
            let level = &a[i] - &nu;
            if level > a[j] {
                report.filtration.push(format!(
                    "d {} has component {} along {} at level {level} > {}",
                    name(j),
                    x,
                    name(i),
                    a[j]
                ));
            }
            if let Some(g) = self.space.grading() {
                if g[i] != g[j] - 1 {
                    report.grading.push(format!(
                        "d {} (degree {}) hits {} (degree {})",
                        name(j),
                        g[j],
                        name(i),
                        g[i]
                    ));
                }
            }
        }
        for j in 0..n {
            let col = self.differential.column(j);
            if let Some(level) = self.space.filtration_of(&col) {
                if level == a[j] {
                    report.non_strict.push(name(j));
                }
            }
        }
        match self.d_squared_witnesses() {
            Ok(w) => report.d_squared = w,
            Err(e) => report.d_squared.push(e.to_string()),
        }
        if report.is_valid() {
            if let Ok(nf) = self.normal_form(None) {
                report.null_pairs = nf
                    .null_pairs()
                    .map(|p| (name(p.eta), name(p.zeta)))
                    .collect();
            }
        }
        report
    }

    /// Exact check of `d² = 0`.
    fn d_squared_witnesses(&self) -> Result<Vec<String>> {
        let n = self.dim();
        let square = match self.orthonormalized() {
            Ok(bar) => {
                // Products have exponents at most 2E, so this precision makes
                // the grid computation exact.
                let e = bar.max_exponent().unwrap_or_else(Exponent::zero);
                let mut p = &(&e + &e) + &Exponent::one();
                if let Valuation::Finite(q) = bar.min_precision() {
                    p = std::cmp::min(p, q);
                }
                let (grid, m) = grid_setup(&bar, &p, &[])?;
                let sq = from_grid_matrix(&grid, &m.matmul(&grid, &m));
                let a = self.space.filtration();
                Matrix::from_fn(n, n, |i, j| sq.get(i, j).shift(&(&a[i] - &a[j])))
            }
            Err(_) => self.differential.mul(&self.differential)?,
        };
        let mut out = Vec::new();
        for (i, j, x) in square.entries() {
            if !x.is_zero() {
                out.push(format!(
                    "d² {} has component {} along {}",
                    self.space.name(j),
                    x,
                    self.space.name(i)
                ));
            }
        }
        Ok(out)
    }

    /// Fail with the validation report unless the complex is valid.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(Box::new(report)))
        }
    }

    pub fn normal_form(&self, precision: Option<&Exponent>) -> Result<NormalForm> {
        let nf = self.grid_normal_form(precision, &[])?;
        let grid = &nf.grid;
        let a = self.space.filtration();
        let mut levels = a.to_vec();
        for &(r, c, v) in &nf.pairs {
            levels[c] = &a[r] + &grid.units_to_exponent(v as i64);
        }
        let basis = from_grid_matrix(grid, &nf.basis);
        let vectors = (0..self.dim())
            .map(|k| {
                let shift = -&levels[k];
                (0..self.dim())
                    .map(|j| basis.get(j, k).shift(&(&a[j] + &shift)))
                    .collect()
            })
            .collect();
        Ok(NormalForm {
            pairs: nf
                .pairs
                .iter()
                .map(|&(r, c, v)| NormalPair {
                    eta: r,
                    zeta: c,
                    length: grid.units_to_exponent(v as i64),
                })
                .collect(),
            homology: nf.homology.clone(),
            precision: grid.precision(),
            vectors,
            levels,
        })
    }

    pub(crate) fn barcode_from(&self, nf: &GridNormalForm) -> Barcode {
        let a = self.space.filtration();
        let mut bars = Barcode::new();
        for &(r, _, v) in &nf.pairs {
            if v > 0 {
                let bar = Bar::finite(a[r].clone(), nf.grid.units_to_exponent(v as i64));
                bars.push(bar.with_degree(self.space.degree(r)), 1);
            }
        }
        for &h in &nf.homology {
            bars.push(Bar::infinite(a[h].clone()).with_degree(self.space.degree(h)), 1);
        }
        bars
    }

    /// Finite bars `[A(η), A(ζ))` for pairs of positive length and infinite
    /// bars `[A(ξ), ∞)`. Bars carry degrees when the complex is graded.
    pub fn barcode(&self, precision: Option<&Exponent>) -> Result<Barcode> {
        let nf = self.grid_normal_form(precision, &[])?;
        Ok(self.barcode_from(&nf))
    }

    pub fn length_spectrum(&self, precision: Option<&Exponent>) -> Result<LengthSpectrum> {
        Ok(self.barcode(precision)?.length_spectrum())
    }

    /// Largest finite bar length, zero if there is none.
    pub fn boundary_depth(&self, precision: Option<&Exponent>) -> Result<Exponent> {
        Ok(self
            .length_spectrum(precision)?
            .max()
            .cloned()
            .unwrap_or_else(Exponent::zero))
    }

    /// All spectral values of the differential (zeros included) from the
    /// greedy Smith normal form, sorted.
    pub fn spectrum_by_snf(&self, precision: Option<&Exponent>) -> Result<Vec<Exponent>> {
        let (grid, m) = self.prepare(precision, &[])?;
        let snf = grid_snf(&grid, m, false);
        let mut out: Vec<Exponent> = snf
            .pivots
            .iter()
            .map(|&(_, _, k)| grid.units_to_exponent(k as i64))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Same multiset by residue exchange.
    pub fn spectrum_by_exchange(&self, precision: Option<&Exponent>) -> Result<Vec<Exponent>> {
        let (grid, m) = self.prepare(precision, &[])?;
        Ok(exchange_levels(&grid, &m)
            .into_iter()
            .map(|k| grid.units_to_exponent(k as i64))
            .collect())
    }

    /// Substitute `T ↦ T^s` and scale filtrations by `s`.
    pub fn rescale(&self, s: &Exponent) -> FilteredComplex {
        FilteredComplex {
            space: self.space.rescale(s),
            differential: self.differential.map(|x| x.rescale(s)),
            precision: self.precision.as_ref().map(|p| p * s),
        }
    }

    /// Homology with its induced filtration, spanned by the normal-form
    /// generators `ξ`.
    pub fn induced_homology_filtration(&self, precision: Option<&Exponent>) -> Result<FilteredSpace> {
        let nf = self.grid_normal_form(precision, &[])?;
        Ok(self.space.restrict(&nf.homology))
    }

    /// Matrix of the map induced on homology by a chain map `map`, in the
    /// basis of [`FilteredComplex::induced_homology_filtration`].
    pub fn homology_matrix(&self, map: &Matrix, precision: Option<&Exponent>) -> Result<FilteredMap> {
        let nf = self.grid_normal_form(precision, &map.exponents().cloned().collect::<Vec<_>>())?;
        self.homology_matrix_from(&nf, map)
    }

    pub(crate) fn homology_matrix_from(&self, nf: &GridNormalForm, map: &Matrix) -> Result<FilteredMap> {
        let n = self.dim();
        if map.rows() != n || map.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "chain map is {}x{} on a complex of dimension {n}",
                map.rows(),
                map.cols()
            )));
        }
        let a = self.space.filtration();
        let grid = &nf.grid;
        let dmap = to_grid_matrix(grid, &orthonormalized_matrix(a, a, map)?)?;
        check_chain_map(grid, &nf.dbar, &dmap, &nf.dbar, self.space.names(), self.space.names())?;
        let conj = nf.basis_inv.matmul(grid, &dmap).matmul(grid, &nf.basis);
        let h = &nf.homology;
        let p = Matrix::from_fn(h.len(), h.len(), |i, j| {
            grid.to_scalar(conj.get(h[i], h[j])).shift(&(&a[h[i]] - &a[h[j]]))
        });
        let space = self.space.restrict(h);
        FilteredMap::new(space.clone(), space, p)
    }
}

/// `D d = d′ D` modulo the precision, with a witness otherwise.
pub(crate) fn check_chain_map(
    grid: &Grid,
    d_source: &GridMatrix,
    map: &GridMatrix,
    d_target: &GridMatrix,
    source_names: &[String],
    target_names: &[String],
) -> Result<()> {
    let left = map.matmul(grid, d_source);
    let right = d_target.matmul(grid, map);
    for i in 0..left.rows {
        for j in 0..left.cols {
            if left.get(i, j) != right.get(i, j) {
                let mut diff = left.get(i, j).to_vec();
                Grid::xor_into(&mut diff, right.get(i, j));
                return Err(Error::NotChainMap {
                    witness: format!(
                        "(D d − d′ D)({}) has component {} along {} (orthonormal coordinates)",
                        source_names[j],
                        grid.to_scalar(&diff),
                        target_names[i]
                    ),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn complex(levels: &[Exponent], rows: &[&[&str]]) -> FilteredComplex {
        let space = FilteredSpace::anonymous(levels.to_vec());
        let d = if rows.is_empty() {
            Matrix::zeros(levels.len(), levels.len())
        } else {
            Matrix::parse_rows(rows).unwrap()
        };
        FilteredComplex::new(space, d).unwrap()
    }

    /// y (A = 2), x (A = 1/2), d y = x.
    fn two_generator() -> FilteredComplex {
        complex(&[e(2, 1), e(1, 2)], &[&["0", "0"], &["1", "0"]])
    }

    /// x1, x2 (A = 0), y1 (A = 1), y2 (A = 3); d y1 = x1 + x2, d y2 = x2.
    fn four_generator() -> FilteredComplex {
        complex(
            &[e(0, 1), e(0, 1), e(1, 1), e(3, 1)],
            &[
                &["0", "0", "1", "0"],
                &["0", "0", "1", "1"],
                &["0", "0", "0", "0"],
                &["0", "0", "0", "0"],
            ],
        )
    }

    #[test]
    fn zero_differential() {
        let c = complex(&[e(1, 1), e(2, 1)], &[]);
        assert!(c.validate().is_valid());
        let b = c.barcode(None).unwrap();
        assert_eq!(
            b,
            Barcode::from_bars([Bar::infinite(e(1, 1)), Bar::infinite(e(2, 1))])
        );
        assert_eq!(c.boundary_depth(None).unwrap(), e(0, 1));
        assert_eq!(c.induced_homology_filtration(None).unwrap(), c.space().clone());
    }

    #[test]
    fn two_generator_bar() {
        let c = two_generator();
        assert_eq!(
            c.barcode(None).unwrap(),
            Barcode::from_bars([Bar::finite(e(1, 2), e(3, 2))])
        );
        assert_eq!(c.boundary_depth(None).unwrap(), e(3, 2));
        assert_eq!(c.induced_homology_filtration(None).unwrap().dim(), 0);
        let scaled = c.rescale(&e(2, 1)).barcode(None).unwrap();
        assert_eq!(scaled, Barcode::from_bars([Bar::finite(e(1, 1), e(3, 1))]));
        assert_eq!(c.rescale(&e(1, 1)), c);
    }

    #[test]
    fn four_generator_spectrum() {
        let c = four_generator();
        let s = c.length_spectrum(None).unwrap();
        assert_eq!(s, LengthSpectrum::new(vec![e(1, 1), e(3, 1)], 0));
        assert_eq!(c.boundary_depth(None).unwrap(), e(3, 1));
        assert_eq!(c.spectrum_by_snf(None).unwrap(), s.finite);
        assert_eq!(c.spectrum_by_exchange(None).unwrap(), s.finite);
        let half = c.rescale(&e(1, 2)).length_spectrum(None).unwrap();
        assert_eq!(half.finite, vec![e(1, 2), e(3, 2)]);
    }

    #[test]
    fn normal_form_vectors_cancel() {
        let c = complex(
            &[e(0, 1), e(1, 3), e(2, 1), e(5, 2)],
            &[
                &["0", "0", "T^{1/2}", "1 + T"],
                &["0", "0", "T^{7/3}", "T^{1/6}"],
                &["0", "0", "0", "0"],
                &["0", "0", "0", "0"],
            ],
        );
        c.ensure_valid().unwrap();
        let nf = c.normal_form(None).unwrap();
        assert_eq!(nf.pairs.len(), 2);
        for p in &nf.pairs {
            let zeta = Matrix::from_fn(4, 1, |i, _| nf.vectors[p.zeta][i].clone());
            let image = c.differential().mul(&zeta).unwrap();
            for i in 0..4 {
                assert!(image.get(i, 0).agrees_below(&nf.vectors[p.eta][i], &e(3, 1)));
            }
            assert_eq!(c.space().filtration_of(&nf.vectors[p.eta]).as_ref(), Some(nf.level(p.eta)));
            assert_eq!(c.space().filtration_of(&nf.vectors[p.zeta]).as_ref(), Some(nf.level(p.zeta)));
        }
        assert_eq!(c.spectrum_by_snf(None).unwrap(), c.length_spectrum(None).unwrap().finite);
    }

    #[test]
    fn validation_witnesses() {
        let up = complex(&[e(0, 1), e(1, 1)], &[&["0", "0"], &["1", "0"]]);
        let r = up.validate();
        assert_eq!(r.filtration.len(), 1);
        assert!(r.filtration[0].contains("x0"));
        let loop_ = complex(&[e(0, 1), e(0, 1)], &[&["0", "1"], &["1", "0"]]);
        let r = loop_.validate();
        assert!(!r.d_squared.is_empty());
        assert!(matches!(loop_.ensure_valid(), Err(Error::Validation(_))));
    }

    #[test]
    fn null_pairs_are_reported_not_barcoded() {
        let c = complex(&[e(1, 1), e(1, 1)], &[&["0", "1"], &["0", "0"]]);
        let r = c.validate();
        assert!(r.is_valid());
        assert_eq!(r.null_pairs, vec![("x0".to_string(), "x1".to_string())]);
        assert!(c.barcode(None).unwrap().is_empty());
    }

    #[test]
    fn homology_matrix_examples() {
        let c = complex(&[e(1, 1), e(2, 1)], &[]);
        let id = c.homology_matrix(&Matrix::identity(2), None).unwrap();
        assert!(id.matrix.agrees_below(&Matrix::identity(2), &c.default_precision()));
        let d = Matrix::parse_rows(&[&["0", "T^2"], &["0", "T"]]).unwrap();
        let h = c.homology_matrix(&d, None).unwrap();
        assert!(h.matrix.agrees_below(&d, &c.default_precision()));
        let two = two_generator();
        let not_chain = Matrix::parse_rows(&[&["1", "0"], &["0", "0"]]).unwrap();
        assert!(matches!(
            two.homology_matrix(&not_chain, None),
            Err(Error::NotChainMap { .. })
        ));
    }
}
