//! Shifted mapping cones and checkers for the spectrum separation and
//! deformation statements.

use crate::barcode::LengthSpectrum;
use crate::complex::{check_chain_map, grid_normal_form, FilteredComplex, GridNormalForm};
use crate::error::{Error, Result};
use crate::filtered::{
    certifying_precision, from_grid_matrix, grid_snf, orthonormalized_matrix, to_grid_matrix, FilteredMap,
    FilteredSpace,
};
use crate::grid::{common_denominator, Grid, GridMatrix};
use crate::matrix::Matrix;
use crate::novikov::{Exponent, Valuation};

/// `Cone(C, d, T^σ D)` on `C ⊕ C′`: the first summand is the source of `D`.
#[derive(Clone, Debug)]
pub struct ShiftedCone {
    pub source: FilteredComplex,
    pub target: FilteredComplex,
    pub map: Matrix,
    pub shift: Exponent,
    pub cone: FilteredComplex,
}

/// Cone differential `(c, c′) ↦ (d c, T^σ D c + d′ c′)` (signs are
/// irrelevant in characteristic two). Generators are renamed `s.<name>` and
/// `t.<name>`; degrees of the first summand go up by one.
pub fn build_cone(
    source: &FilteredComplex,
    target: &FilteredComplex,
    map: &Matrix,
    sigma: &Exponent,
) -> Result<ShiftedCone> {
    let (n, m) = (source.dim(), target.dim());
    if map.rows() != m || map.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, expected {m}x{n}",
            map.rows(),
            map.cols()
        )));
    }
    if sigma.is_negative() {
        return Err(Error::hypothesis("σ ≥ 0", format!("σ = {sigma}")));
    }
    let (s, t) = (source.space(), target.space());
    let names = s
        .names()
        .iter()
        .map(|x| format!("s.{x}"))
        .chain(t.names().iter().map(|x| format!("t.{x}")))
        .collect();
    let filtration = s.filtration().iter().chain(t.filtration()).cloned().collect();
    let mut space = FilteredSpace::new(names, filtration)?;
    if let (Some(gs), Some(gt)) = (s.grading(), t.grading()) {
        space = space.with_grading(gs.iter().map(|g| g + 1).chain(gt.iter().copied()).collect())?;
    }
    let d = Matrix::block(
        source.differential(),
        &Matrix::zeros(n, m),
        &map.shift(sigma),
        target.differential(),
    )?;
    let mut cone = FilteredComplex::new(space, d)?;
    if let Some(p) = source.precision_override().or(target.precision_override()) {
        cone = cone.with_precision(p + sigma);
    }
    let bar = FilteredMap::new(s.clone(), t.clone(), map.shift(sigma))?;
    if !bar.is_filtered() {
        return Err(Error::NotFiltered {
            witness: format!("T^σ D lowers filtration by {}", bar.filtration_drop()),
        });
    }
    check_chain_exact(source, target, map)?;
    Ok(ShiftedCone {
        source: source.clone(),
        target: target.clone(),
        map: map.clone(),
        shift: sigma.clone(),
        cone,
    })
}

/// Exact check of `D d = d′ D` (both sides have bounded exponents, so a
/// large enough grid precision makes it exact).
fn check_chain_exact(source: &FilteredComplex, target: &FilteredComplex, map: &Matrix) -> Result<()> {
    let (a, b) = (source.space().filtration(), target.space().filtration());
    // Make D filtered by a uniform shift; the identity is homogeneous in it.
    let drop = FilteredMap::new(source.space().clone(), target.space().clone(), map.clone())?
        .filtration_drop();
    let lift = match drop {
        Valuation::Finite(v) if v.is_negative() => -v,
        _ => Exponent::zero(),
    };
    let dbar = orthonormalized_matrix(a, a, source.differential())?;
    let d2bar = orthonormalized_matrix(b, b, target.differential())?;
    let mbar = orthonormalized_matrix(a, b, &map.shift(&lift))?;
    let top = [&dbar, &d2bar, &mbar]
        .iter()
        .filter_map(|m| m.max_exponent())
        .max()
        .unwrap_or_else(Exponent::zero);
    let mut precision = &(&top + &top) + &Exponent::one();
    for m in [&dbar, &d2bar, &mbar] {
        if let Valuation::Finite(p) = m.min_precision() {
            precision = std::cmp::min(precision, p);
        }
    }
    let grid = shared_grid(&[&dbar, &d2bar, &mbar], &precision, &[])?;
    let g = |m: &Matrix| to_grid_matrix(&grid, m);
    check_chain_map(
        &grid,
        &g(&dbar)?,
        &g(&mbar)?,
        &g(&d2bar)?,
        source.space().names(),
        target.space().names(),
    )
}

fn shared_grid(parts: &[&Matrix], precision: &Exponent, extra: &[Exponent]) -> Result<Grid> {
    for m in parts {
        if let Valuation::Finite(p) = m.min_precision() {
            if &p < precision {
                return Err(Error::PrecisionExhausted {
                    precision: precision.to_string(),
                    detail: format!("an input entry is only known below {p}"),
                });
            }
        }
    }
    let denom = common_denominator(
        parts
            .iter()
            .flat_map(|m| m.exponents())
            .chain(extra.iter())
            .chain(std::iter::once(precision)),
    );
    Grid::for_precision(denom, precision)
}

/// `σ* = spread + boundary depth + 1`.
pub fn suggest_sigma(c: &FilteredComplex) -> Result<Exponent> {
    Ok(&(&c.space().spread() + &c.boundary_depth(None)?) + &Exponent::one())
}

/// The cone spectrum split at `σ`, with the pieces it is asserted to match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSpectrum {
    pub shift: Exponent,
    /// Cone bar lengths below `σ`.
    pub low: Vec<Exponent>,
    /// Cone bar lengths at or above `σ`.
    pub high: Vec<Exponent>,
    pub infinite: usize,
    /// Spectra of the source and target complexes.
    pub source_spectrum: LengthSpectrum,
    pub target_spectrum: LengthSpectrum,
    /// All spectral values of the induced map on homology, zeros included.
    pub homology_values: Vec<Exponent>,
    pub precision: Exponent,
}

impl SplitSpectrum {
    /// High entries minus `σ`.
    pub fn high_minus_shift(&self) -> Vec<Exponent> {
        self.high.iter().map(|h| h - &self.shift).collect()
    }
}

/// Homology map `H(C) → H(C′)` computed on one grid with both normal forms.
pub(crate) struct HomologyData {
    pub source_nf: GridNormalForm,
    pub target_nf: GridNormalForm,
    pub map: FilteredMap,
}

pub(crate) fn homology_data(
    source: &FilteredComplex,
    target: &FilteredComplex,
    map: &Matrix,
    precision: &Exponent,
    extra: &[Exponent],
) -> Result<HomologyData> {
    let (a, b) = (source.space().filtration(), target.space().filtration());
    let dbar = source.orthonormalized()?;
    let d2bar = target.orthonormalized()?;
    let mbar = orthonormalized_matrix(a, b, map)?;
    let grid = shared_grid(&[&dbar, &d2bar, &mbar], precision, extra)?;
    let g = |m: &Matrix| to_grid_matrix(&grid, m);
    let (gd, gd2, gm) = (g(&dbar)?, g(&d2bar)?, g(&mbar)?);
    check_chain_map(&grid, &gd, &gm, &gd2, source.space().names(), target.space().names())?;
    let source_nf = grid_normal_form(&grid, &gd)?;
    let target_nf = grid_normal_form(&grid, &gd2)?;
    let conj = target_nf.basis_inv.matmul(&grid, &gm).matmul(&grid, &source_nf.basis);
    let (hs, ht) = (&source_nf.homology, &target_nf.homology);
    let p = Matrix::from_fn(ht.len(), hs.len(), |i, j| {
        grid.to_scalar(conj.get(ht[i], hs[j])).shift(&(&b[ht[i]] - &a[hs[j]]))
    });
    let fmap = FilteredMap::new(source.space().restrict(hs), target.space().restrict(ht), p)?;
    Ok(HomologyData {
        source_nf,
        target_nf,
        map: fmap,
    })
}

/// The induced map on homology between two complexes.
pub fn homology_map(
    source: &FilteredComplex,
    target: &FilteredComplex,
    map: &Matrix,
    precision: Option<&Exponent>,
) -> Result<FilteredMap> {
    let p = match precision {
        Some(p) => p.clone(),
        None => {
            let mbar = orthonormalized_matrix(source.space().filtration(), target.space().filtration(), map)?;
            [source.default_precision(), target.default_precision(), certifying_precision(&mbar)]
                .into_iter()
                .max()
                .unwrap()
        }
    };
    Ok(homology_data(source, target, map, &p, &[])?.map)
}

impl ShiftedCone {
    /// Working precision for the cone and everything compared against it.
    pub fn working_precision(&self, requested: Option<&Exponent>) -> Exponent {
        self.cone.working_precision(requested)
    }

    /// Split the cone's finite spectrum at `σ` and check it against the
    /// spectra of the pieces: low = spectra of source and target, high − σ =
    /// spectral values of the homology map, and `B + B′ − 2·rank` infinite
    /// bars.
    pub fn split_spectrum(&self, precision: Option<&Exponent>) -> Result<SplitSpectrum> {
        let prec = self.working_precision(precision);
        let spectrum = self.cone.length_spectrum(Some(&prec))?;
        let data = homology_data(&self.source, &self.target, &self.map, &prec, &[self.shift.clone()])?;
        let source_spectrum = self.source.barcode_from(&data.source_nf).length_spectrum();
        let target_spectrum = self.target.barcode_from(&data.target_nf).length_spectrum();
        let homology_values = data.map.spectral_values(Some(&prec))?;
        let (low, high): (Vec<Exponent>, Vec<Exponent>) =
            spectrum.finite.iter().cloned().partition(|l| l < &self.shift);
        let split = SplitSpectrum {
            shift: self.shift.clone(),
            low,
            high,
            infinite: spectrum.infinite,
            source_spectrum,
            target_spectrum,
            homology_values,
            precision: prec,
        };
        if let Err(detail) = split.consistency() {
            let sigma_star = std::cmp::max(suggest_sigma(&self.source)?, suggest_sigma(&self.target)?);
            if self.shift < sigma_star {
                return Err(Error::hypothesis(
                    format!("σ ≥ σ* = {sigma_star}"),
                    format!("σ = {}; {detail}", self.shift),
                ));
            }
            return Err(Error::SeparationFailure(detail));
        }
        Ok(split)
    }
}

impl SplitSpectrum {
    fn consistency(&self) -> std::result::Result<(), String> {
        let mut expected_low: Vec<Exponent> = self
            .source_spectrum
            .finite
            .iter()
            .chain(&self.target_spectrum.finite)
            .cloned()
            .collect();
        expected_low.sort();
        if self.low != expected_low {
            return Err(format!(
                "low part {:?} differs from the spectra of the pieces {:?}",
                self.low, expected_low
            ));
        }
        let mut expected_high: Vec<Exponent> =
            self.homology_values.iter().map(|b| b + &self.shift).collect();
        expected_high.sort();
        if self.high != expected_high {
            return Err(format!(
                "high part {:?} differs from σ + homology spectral values {:?}",
                self.high, expected_high
            ));
        }
        let b = self.source_spectrum.infinite + self.target_spectrum.infinite;
        let expected_inf = b - 2 * self.homology_values.len();
        if self.infinite != expected_inf {
            return Err(format!(
                "{} infinite bars, expected {expected_inf}",
                self.infinite
            ));
        }
        Ok(())
    }
}

/// Report of the deformation check without a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicDeformationReport {
    pub bound: Exponent,
    /// `𝒜(d − d0)`.
    pub perturbation: Valuation,
    pub spectrum0: LengthSpectrum,
    pub spectrum: LengthSpectrum,
    /// The common part of both spectra below the bound.
    pub matched: Vec<Exponent>,
}

fn same_space(c0: &FilteredComplex, c: &FilteredComplex) -> Result<()> {
    if c0.space() != c.space() {
        return Err(Error::DimensionMismatch(
            "both differentials must live on the same filtered space".into(),
        ));
    }
    Ok(())
}

/// `𝒜(X − Y)` for two maps on the same space.
fn difference_drop(space: &FilteredSpace, x: &Matrix, y: &Matrix) -> Result<Valuation> {
    let m = x.add(y)?;
    Ok(FilteredMap::new(space.clone(), space.clone(), m)?.filtration_drop())
}

/// If `𝒜(d − d0) ≥ A` then both complexes have the same bar lengths below
/// `A`, with multiplicity.
pub fn check_deformation_basic(
    c0: &FilteredComplex,
    c: &FilteredComplex,
    bound: &Exponent,
    precision: Option<&Exponent>,
) -> Result<BasicDeformationReport> {
    same_space(c0, c)?;
    c0.ensure_valid()?;
    c.ensure_valid()?;
    let perturbation = difference_drop(c.space(), c.differential(), c0.differential())?;
    if perturbation < Valuation::Finite(bound.clone()) {
        return Err(Error::hypothesis(
            format!("𝒜(d − d0) ≥ A = {bound}"),
            format!("𝒜(d − d0) = {perturbation}"),
        ));
    }
    let prec = precision.cloned().unwrap_or_else(|| {
        [c0.working_precision(None), c.working_precision(None), bound.clone()]
            .into_iter()
            .max()
            .unwrap()
    });
    let spectrum0 = c0.length_spectrum(Some(&prec))?;
    let spectrum = c.length_spectrum(Some(&prec))?;
    let (low0, low) = (spectrum0.below(bound), spectrum.below(bound));
    if low0 != low {
        return Err(Error::assertion(
            "spectra below A coincide",
            format!("below {bound}: {low0:?} vs {low:?}"),
        ));
    }
    Ok(BasicDeformationReport {
        bound: bound.clone(),
        perturbation,
        spectrum0,
        spectrum,
        matched: low,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeformationCase {
    /// Agreement of low spectra below `a`.
    Low,
    /// Agreement of high spectra below `σ + A − a`.
    High,
}

/// Data for the cone deformation check: `(C, d0, D0)` and `(C, d, D)` with
/// `𝒜(d − d0) ≥ a` and `𝒜(D − D0) ≥ A`.
#[derive(Clone, Debug)]
pub struct ConeDeformation {
    pub base0: FilteredComplex,
    pub base: FilteredComplex,
    pub map0: Matrix,
    pub map: Matrix,
    pub sigma: Exponent,
    pub a: Exponent,
    pub big_a: Exponent,
}

#[derive(Clone, Debug)]
pub struct ConeDeformationReport {
    pub case: DeformationCase,
    /// Number of leading entries asserted equal.
    pub verified: usize,
    pub split0: SplitSpectrum,
    pub split: SplitSpectrum,
    /// Elimination snapshots for the high case, when requested.
    pub transcript: Option<Transcript>,
}

/// Intermediate matrices of the block elimination of the `d0` cone in the
/// normal-form basis of `d`.
#[derive(Clone, Debug)]
pub struct Transcript {
    /// `(label, matrix)` in orthonormal coordinates; rows and columns are
    /// ordered as the cone generators.
    pub stages: Vec<(String, Matrix)>,
    /// Every pivot valuation, zeros included, sorted.
    pub values: Vec<Exponent>,
}

impl ConeDeformation {
    fn check_hypotheses(&self, case: DeformationCase) -> Result<()> {
        same_space(&self.base0, &self.base)?;
        let space = self.base.space();
        if !(self.a.is_positive() && self.big_a > self.a) {
            return Err(Error::hypothesis(
                "A > a > 0",
                format!("a = {}, A = {}", self.a, self.big_a),
            ));
        }
        let m = difference_drop(space, self.base.differential(), self.base0.differential())?;
        if m < Valuation::Finite(self.a.clone()) {
            return Err(Error::hypothesis(
                format!("𝒜(M′) ≥ a = {}", self.a),
                format!("𝒜(M′) = {m}"),
            ));
        }
        let n = difference_drop(space, &self.map, &self.map0)?;
        if n < Valuation::Finite(self.big_a.clone()) {
            return Err(Error::hypothesis(
                format!("𝒜(N′) ≥ A = {}", self.big_a),
                format!("𝒜(N′) = {n}"),
            ));
        }
        for c in [&self.base0, &self.base] {
            c.ensure_valid()?;
            let star = suggest_sigma(c)?;
            if self.sigma < star {
                return Err(Error::hypothesis(
                    format!("σ ≥ σ* = {star}"),
                    format!("σ = {}", self.sigma),
                ));
            }
        }
        if case == DeformationCase::High {
            let h0 = self.base0.barcode(None)?.infinite_count();
            let h = self.base.barcode(None)?.infinite_count();
            if h0 != h {
                return Err(Error::hypothesis(
                    "dim H(C, d0) = dim H(C, d)",
                    format!("{h0} vs {h}"),
                ));
            }
            let depth = self.base.boundary_depth(None)?;
            if depth >= self.a {
                return Err(Error::hypothesis(
                    format!("β′_K′ < a = {}", self.a),
                    format!("largest low entry is {depth}"),
                ));
            }
        }
        Ok(())
    }

    fn precision(&self, requested: Option<&Exponent>) -> Result<Exponent> {
        if let Some(p) = requested {
            return Ok(p.clone());
        }
        let c0 = build_cone(&self.base0, &self.base0, &self.map0, &self.sigma)?;
        let c = build_cone(&self.base, &self.base, &self.map, &self.sigma)?;
        Ok(std::cmp::max(c0.working_precision(None), c.working_precision(None)))
    }

    /// Verify the deformation statement for `case`. With `record` the high
    /// case also returns the elimination snapshots.
    pub fn check(
        &self,
        case: DeformationCase,
        precision: Option<&Exponent>,
        record: bool,
    ) -> Result<ConeDeformationReport> {
        self.check_hypotheses(case)?;
        let prec = self.precision(precision)?;
        let cone0 = build_cone(&self.base0, &self.base0, &self.map0, &self.sigma)?;
        let cone = build_cone(&self.base, &self.base, &self.map, &self.sigma)?;
        let split0 = cone0.split_spectrum(Some(&prec))?;
        let split = cone.split_spectrum(Some(&prec))?;
        let (verified, transcript) = match case {
            DeformationCase::Low => {
                let l = split.low.iter().filter(|b| *b < &self.a).count();
                compare_prefix("low", &split0.low, &split.low, l)?;
                (l, None)
            }
            DeformationCase::High => {
                let cut = &(&self.sigma + &self.big_a) - &self.a;
                let l = split.high.iter().filter(|b| *b < &cut).count();
                compare_prefix("high", &split0.high, &split.high, l)?;
                let t = self.transcript(&cone0, &prec, record)?;
                let mut direct: Vec<Exponent> = split0.low.iter().chain(&split0.high).cloned().collect();
                direct.sort();
                let positive: Vec<Exponent> =
                    t.values.iter().filter(|v| v.is_positive()).cloned().collect();
                if positive != direct {
                    return Err(Error::assertion(
                        "block elimination reproduces the cone spectrum",
                        format!("{positive:?} vs {direct:?}"),
                    ));
                }
                (l, Some(t))
            }
        };
        Ok(ConeDeformationReport {
            case,
            verified,
            split0,
            split,
            transcript: transcript.filter(|_| record),
        })
    }

    /// Block elimination of the `d0` cone written in the normal-form basis
    /// of `d` on both summands: clear the `(η, ζ)` pivots of the first
    /// summand, then those of the second, then reduce what is left.
    fn transcript(&self, cone0: &ShiftedCone, precision: &Exponent, record: bool) -> Result<Transcript> {
        let n = self.base.dim();
        let dbar = self.base.orthonormalized()?;
        let cbar = cone0.cone.orthonormalized()?;
        let grid = shared_grid(&[&dbar, &cbar], precision, &[])?;
        let nf = grid_normal_form(&grid, &to_grid_matrix(&grid, &dbar)?)?;
        let mut big_b = GridMatrix::zeros(&grid, 2 * n, 2 * n);
        let mut big_b_inv = GridMatrix::zeros(&grid, 2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                for off in [0, n] {
                    big_b.set(i + off, j + off, nf.basis.get(i, j));
                    big_b_inv.set(i + off, j + off, nf.basis_inv.get(i, j));
                }
            }
        }
        let mut m = big_b_inv
            .matmul(&grid, &to_grid_matrix(&grid, &cbar)?)
            .matmul(&grid, &big_b);
        let mut stages = Vec::new();
        let snap = |label: &str, m: &GridMatrix, stages: &mut Vec<(String, Matrix)>| {
            if record {
                stages.push((label.to_string(), from_grid_matrix(&grid, m)));
            }
        };
        snap("normal-form basis", &m, &mut stages);
        let mut values = Vec::new();
        let mut live_rows: Vec<usize> = (0..2 * n).collect();
        let mut live_cols: Vec<usize> = (0..2 * n).collect();
        for (label, off) in [("first summand cleared", 0), ("second summand cleared", n)] {
            let rows: Vec<usize> = nf.pairs.iter().map(|&(r, _, _)| r + off).collect();
            let cols: Vec<usize> = nf.pairs.iter().map(|&(_, c, _)| c + off).collect();
            let mut rows_left = rows.clone();
            let mut cols_left = cols.clone();
            while let Some((v, r, c)) = m.min_valuation_in(&rows_left, &cols_left) {
                if let Some((w, _, _)) = m.min_valuation_in(&[r], &live_cols) {
                    if w < v {
                        return Err(Error::assertion("block pivot", "pivot is not minimal in its row"));
                    }
                }
                if let Some((w, _, _)) = m.min_valuation_in(&live_rows, &[c]) {
                    if w < v {
                        return Err(Error::assertion("block pivot", "pivot is not minimal in its column"));
                    }
                }
                eliminate(&grid, &mut m, r, c, v, &live_rows, &live_cols);
                live_rows.retain(|&i| i != r);
                live_cols.retain(|&j| j != c);
                rows_left.retain(|&i| i != r);
                cols_left.retain(|&j| j != c);
                values.push(grid.units_to_exponent(v as i64));
            }
            if !rows_left.is_empty() {
                return Err(Error::assertion(
                    "block pivot",
                    "the normal-form block lost rank under the perturbation",
                ));
            }
            let block: Vec<usize> = (off..off + n).collect();
            let rest_rows: Vec<usize> = live_rows.iter().copied().filter(|i| block.contains(i)).collect();
            let rest_cols: Vec<usize> = live_cols.iter().copied().filter(|j| block.contains(j)).collect();
            if m.min_valuation_in(&rest_rows, &rest_cols).is_some() {
                return Err(Error::assertion(
                    "block elimination",
                    format!("{label}: the rest of the diagonal block is not zero"),
                ));
            }
            snap(label, &m, &mut stages);
        }
        let mut rest = GridMatrix::zeros(&grid, live_rows.len(), live_cols.len());
        for (i, &r) in live_rows.iter().enumerate() {
            for (j, &c) in live_cols.iter().enumerate() {
                rest.set(i, j, m.get(r, c));
            }
        }
        let snf = grid_snf(&grid, rest, false);
        for &r in &live_rows {
            for &c in &live_cols {
                m.set(r, c, &grid.zero());
            }
        }
        for &(i, j, v) in &snf.pivots {
            m.set(live_rows[i], live_cols[j], &grid.monomial(v));
            values.push(grid.units_to_exponent(v as i64));
        }
        snap("remaining block reduced", &m, &mut stages);
        values.sort();
        Ok(Transcript { stages, values })
    }
}

/// Two-sided elimination of the pivot `(r, c)` of valuation `v` within the
/// live rows and columns.
fn eliminate(grid: &Grid, m: &mut GridMatrix, r: usize, c: usize, v: usize, rows: &[usize], cols: &[usize]) {
    let unit = grid.shift_down(m.get(r, c), v);
    if Grid::popcount(&unit) != 1 {
        m.row_scale(grid, r, &grid.inv_unit(&unit));
    }
    for &i in rows {
        if i != r && !Grid::is_zero(m.get(i, c)) {
            let f = grid.shift_down(m.get(i, c), v);
            m.row_axpy(grid, i, r, &f);
        }
    }
    for &j in cols {
        if j != c && !Grid::is_zero(m.get(r, j)) {
            let g = grid.shift_down(m.get(r, j), v);
            m.col_axpy(grid, j, c, &g);
        }
    }
}

fn compare_prefix(what: &str, x: &[Exponent], y: &[Exponent], l: usize) -> Result<()> {
    if x.len() < l || y.len() < l || x[..l] != y[..l] {
        return Err(Error::assertion(
            format!("{what} spectra agree up to index {l}"),
            format!("{x:?} vs {y:?}"),
        ));
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

    fn two_generator() -> FilteredComplex {
        complex(&[e(2, 1), e(1, 2)], &[&["0", "0"], &["1", "0"]])
    }

    #[test]
    fn identity_cone_on_one_generator() {
        let c = complex(&[e(0, 1)], &[]);
        let cone = build_cone(&c, &c, &Matrix::identity(1), &e(5, 1)).unwrap();
        let s = cone.cone.length_spectrum(None).unwrap();
        assert_eq!(s, LengthSpectrum::new(vec![e(5, 1)], 0));
    }

    #[test]
    fn zero_map_cone_is_direct_sum() {
        let c = two_generator();
        let cone = build_cone(&c, &c, &Matrix::zeros(2, 2), &e(4, 1)).unwrap();
        let split = cone.split_spectrum(None).unwrap();
        assert_eq!(split.low, vec![e(3, 2), e(3, 2)]);
        assert!(split.high.is_empty());
        assert_eq!(split.infinite, 0);
    }

    #[test]
    fn sigma_zero_identity_cone() {
        let c = two_generator();
        let cone = build_cone(&c, &c, &Matrix::identity(2), &e(0, 1)).unwrap();
        // s.x + t.y is a filtration-2 primitive of d(s.y): both pairs have
        // length zero, so the cone has no bars at all.
        let s = cone.cone.length_spectrum(None).unwrap();
        assert!(s.finite.is_empty() && s.infinite == 0);
        assert_eq!(cone.cone.spectrum_by_snf(None).unwrap(), vec![e(0, 1), e(0, 1)]);
    }

    #[test]
    fn identity_split_on_two_generators() {
        let c = complex(&[e(0, 1), e(0, 1)], &[]);
        let cone = build_cone(&c, &c, &Matrix::identity(2), &e(5, 1)).unwrap();
        let split = cone.split_spectrum(None).unwrap();
        assert!(split.low.is_empty());
        assert_eq!(split.high, vec![e(5, 1), e(5, 1)]);
        assert_eq!(split.infinite, 0);
    }

    #[test]
    fn suggest_sigma_examples() {
        let flat = complex(&[e(0, 1), e(1, 1)], &[]);
        assert_eq!(suggest_sigma(&flat).unwrap(), e(2, 1));
        assert_eq!(suggest_sigma(&two_generator()).unwrap(), e(4, 1));
    }

    #[test]
    fn non_chain_map_is_rejected() {
        let c = two_generator();
        let d = Matrix::parse_rows(&[&["1", "0"], &["0", "0"]]).unwrap();
        assert!(matches!(
            build_cone(&c, &c, &d, &e(1, 1)),
            Err(Error::NotChainMap { .. })
        ));
    }

    #[test]
    fn basic_deformation_examples() {
        let c = two_generator();
        let r = check_deformation_basic(&c, &c, &e(10, 1), None).unwrap();
        assert_eq!(r.matched, vec![e(3, 2)]);
        // Normal form with β = 5 plus a perturbation of filtration drop 10.
        let d0 = complex(&[e(5, 1), e(0, 1)], &[&["0", "0"], &["1", "0"]]);
        let d = complex(&[e(5, 1), e(0, 1)], &[&["0", "0"], &["1 + T^{10}", "0"]]);
        let r = check_deformation_basic(&d0, &d, &e(10, 1), None).unwrap();
        assert_eq!(r.matched, vec![e(5, 1)]);
        let far = complex(&[e(5, 1), e(0, 1)], &[&["0", "0"], &["1 + T^{-4}", "0"]]);
        assert!(matches!(
            check_deformation_basic(&d0, &far, &e(2, 1), None),
            Err(Error::HypothesisFailure { .. })
        ));
    }

    #[test]
    fn cone_deformation_trivial_case() {
        let c = two_generator();
        let sigma = e(6, 1);
        let dep = ConeDeformation {
            base0: c.clone(),
            base: c.clone(),
            map0: Matrix::identity(2),
            map: Matrix::identity(2),
            sigma,
            a: e(2, 1),
            big_a: e(3, 1),
        };
        let low = dep.check(DeformationCase::Low, None, false).unwrap();
        assert_eq!(low.verified, 2);
        let high = dep.check(DeformationCase::High, None, true).unwrap();
        assert_eq!(high.transcript.unwrap().stages.len(), 4);
        let bad = ConeDeformation {
            a: e(0, 1),
            ..dep
        };
        assert!(matches!(
            bad.check(DeformationCase::Low, None, false),
            Err(Error::HypothesisFailure { .. })
        ));
    }
}
