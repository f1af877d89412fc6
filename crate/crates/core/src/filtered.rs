//! Filtered vector spaces over the Novikov field, filtered maps and their
//! spectral value decompositions.

use crate::error::{Error, Result};
use crate::grid::{common_denominator, Grid, GridMatrix};
use crate::matrix::Matrix;
use crate::novikov::{Exponent, NovikovScalar, Valuation};

/// A finite-dimensional space with a declared orthogonal basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredSpace {
    names: Vec<String>,
    filtration: Vec<Exponent>,
    grading: Option<Vec<i64>>,
}

impl FilteredSpace {
    pub fn new(names: Vec<String>, filtration: Vec<Exponent>) -> Result<Self> {
        if names.len() != filtration.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} names but {} filtration values",
                names.len(),
                filtration.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::format("generators", format!("duplicate name {n:?}")));
            }
        }
        Ok(FilteredSpace {
            names,
            filtration,
            grading: None,
        })
    }

    /// Generators named `x0, x1, ...`.
    pub fn anonymous(filtration: Vec<Exponent>) -> Self {
        let names = (0..filtration.len()).map(|i| format!("x{i}")).collect();
        FilteredSpace {
            names,
            filtration,
            grading: None,
        }
    }

    pub fn with_grading(mut self, grading: Vec<i64>) -> Result<Self> {
        if grading.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees for {} generators",
                grading.len(),
                self.dim()
            )));
        }
        self.grading = Some(grading);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn filtration(&self) -> &[Exponent] {
        &self.filtration
    }

    pub fn level(&self, i: usize) -> &Exponent {
        &self.filtration[i]
    }

    pub fn grading(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    pub fn degree(&self, i: usize) -> Option<i64> {
        self.grading.as_ref().map(|g| g[i])
    }

    /// `max A − min A`, zero for the empty space.
    pub fn spread(&self) -> Exponent {
        match (self.filtration.iter().min(), self.filtration.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => Exponent::zero(),
        }
    }

    /// `A(Σ λ_j x_j) = max_j (A(x_j) − ν(λ_j))`; `None` stands for `−∞`.
    pub fn filtration_of(&self, v: &[NovikovScalar]) -> Option<Exponent> {
        assert_eq!(v.len(), self.dim(), "vector length does not match the basis");
        v.iter()
            .zip(&self.filtration)
            .filter_map(|(c, a)| c.valuation().finite().map(|nu| a - nu))
            .max()
    }

    /// Rescaling `x_j ↦ T^{A(x_j)} x_j` to an orthonormal basis, as the list
    /// of exponents `A(x_j)`.
    pub fn orthonormalize(&self) -> Vec<Exponent> {
        self.filtration.clone()
    }

    /// Multiply every filtration value by `s`.
    pub fn rescale(&self, s: &Exponent) -> Self {
        FilteredSpace {
            names: self.names.clone(),
            filtration: self.filtration.iter().map(|a| a * s).collect(),
            grading: self.grading.clone(),
        }
    }

    /// Subspace spanned by the listed basis elements.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        FilteredSpace {
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            filtration: indices.iter().map(|&i| self.filtration[i].clone()).collect(),
            grading: self
                .grading
                .as_ref()
                .map(|g| indices.iter().map(|&i| g[i]).collect()),
        }
    }
}

/// A linear map between filtered spaces, given by its matrix in the declared
/// bases (column `j` is the image of source generator `j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredMap {
    pub source: FilteredSpace,
    pub target: FilteredSpace,
    pub matrix: Matrix,
}

/// One coimage/image pair `D(e) = T^β e′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPair {
    /// Source vector in the declared source basis.
    pub source: Vec<NovikovScalar>,
    /// Target vector in the declared target basis.
    pub target: Vec<NovikovScalar>,
    pub value: Exponent,
}

#[derive(Clone, Debug)]
pub struct SpectralValueDecomposition {
    /// Sorted by value; ties keep elimination order.
    pub pairs: Vec<SpectralPair>,
    pub kernel: Vec<Vec<NovikovScalar>>,
    pub cokernel: Vec<Vec<NovikovScalar>>,
    /// Values are exact below this bound.
    pub precision: Exponent,
    pub certificate: SnfCertificate,
}

impl SpectralValueDecomposition {
    pub fn values(&self) -> Vec<Exponent> {
        self.pairs.iter().map(|p| p.value.clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }
}

/// Transcript of a Smith normal form over `Λ_0`, in orthonormal coordinates:
/// `U · D̄ · V` is zero except at the listed `(row, col)` positions, where it
/// equals `T^value`.
#[derive(Clone, Debug)]
pub struct SnfCertificate {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub diagonal: Vec<(usize, usize, Exponent)>,
    pub precision: Exponent,
}

impl SnfCertificate {
    /// Multiply everything out modulo `T^Π` and check the claimed identities,
    /// plus unimodularity of `U` and `V` via their residue matrices.
    pub fn verify(&self, orthonormalized: &Matrix) -> Result<()> {
        let mut exps: Vec<Exponent> = vec![self.precision.clone()];
        for m in [&self.u, &self.u_inv, &self.v, orthonormalized] {
            exps.extend(m.exponents().cloned());
        }
        let grid = Grid::for_precision(common_denominator(&exps), &self.precision)?;
        let g = |m: &Matrix| to_grid_matrix(&grid, m);
        let (u, u_inv, v, d) = (g(&self.u)?, g(&self.u_inv)?, g(&self.v)?, g(orthonormalized)?);
        let product = u.matmul(&grid, &d).matmul(&grid, &v);
        let mut expected = GridMatrix::zeros(&grid, d.rows, d.cols);
        for (r, c, value) in &self.diagonal {
            let k = grid
                .to_units(value)
                .ok_or_else(|| Error::assertion("certificate", "diagonal value off the grid"))?;
            expected.set(*r, *c, &grid.monomial(k as usize));
        }
        if product != expected {
            return Err(Error::assertion(
                "certificate",
                "U·D̄·V is not the claimed diagonal modulo the precision",
            ));
        }
        if u.matmul(&grid, &u_inv) != GridMatrix::identity(&grid, d.rows) {
            return Err(Error::assertion("certificate", "U·U⁻¹ ≠ I"));
        }
        for (name, m) in [("U", &u), ("V", &v)] {
            if residue_rank(m) != m.rows {
                return Err(Error::assertion(
                    "certificate",
                    format!("{name} is not unimodular over Λ_0"),
                ));
            }
        }
        Ok(())
    }
}

/// Rank over `F_2` of the valuation-zero coefficients.
fn residue_rank(m: &GridMatrix) -> usize {
    let rows: Vec<u128> = (0..m.rows)
        .map(|i| {
            (0..m.cols).fold(0u128, |acc, j| acc | (((m.get(i, j)[0] & 1) as u128) << j))
        })
        .collect();
    f2_rank(rows)
}

pub(crate) fn f2_rank(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        if let Some(p) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) {
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && *row & mask != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

pub(crate) fn to_grid_matrix(grid: &Grid, m: &Matrix) -> Result<GridMatrix> {
    let mut out = GridMatrix::zeros(grid, m.rows(), m.cols());
    for (i, j, x) in m.entries() {
        if !x.is_zero() {
            out.set(i, j, &grid.from_scalar(x)?);
        }
    }
    Ok(out)
}

pub(crate) fn from_grid_matrix(grid: &Grid, m: &GridMatrix) -> Matrix {
    Matrix::from_fn(m.rows, m.cols, |i, j| grid.to_scalar(m.get(i, j)))
}

/// `D̄_ij = D_ij · T^{A_j − A′_i}`, with a witness if some entry has negative
/// valuation.
pub fn orthonormalized_matrix(
    source: &[Exponent],
    target: &[Exponent],
    matrix: &Matrix,
) -> Result<Matrix> {
    let bar = shifted_matrix(source, target, matrix);
    for (i, j, x) in bar.entries() {
        if let Valuation::Finite(v) = x.valuation() {
            if v.is_negative() {
                return Err(Error::NotFiltered {
                    witness: format!(
                        "entry ({i}, {j}) = {} raises the filtration by {}",
                        matrix.get(i, j),
                        -v
                    ),
                });
            }
        }
    }
    Ok(bar)
}

fn shifted_matrix(source: &[Exponent], target: &[Exponent], matrix: &Matrix) -> Matrix {
    Matrix::from_fn(matrix.rows(), matrix.cols(), |i, j| {
        matrix.get(i, j).shift(&(&source[j] - &target[i]))
    })
}

/// Precision that certifies every spectral value of a map in `Λ_0`: each value
/// is at most the valuation of a nonzero `r×r` minor, hence at most
/// `r · (max exponent)`.
pub(crate) fn certifying_precision(bar: &Matrix) -> Exponent {
    let r = bar.rows().min(bar.cols()) as i64;
    let e = bar.max_exponent().unwrap_or_else(Exponent::zero);
    &(&Exponent::integer(r.max(1)) * &e) + &Exponent::one()
}

/// Embed an orthonormalized matrix into a grid at the given precision.
pub(crate) fn grid_setup(
    bar: &Matrix,
    precision: &Exponent,
    extra: &[Exponent],
) -> Result<(Grid, GridMatrix)> {
    if let Valuation::Finite(p) = bar.min_precision() {
        if &p < precision {
            return Err(Error::PrecisionExhausted {
                precision: precision.to_string(),
                detail: format!("an input entry is only known below {p}"),
            });
        }
    }
    let denom = common_denominator(
        bar.exponents()
            .chain(std::iter::once(precision))
            .chain(extra.iter()),
    );
    let grid = Grid::for_precision(denom, precision)?;
    let m = to_grid_matrix(&grid, bar)?;
    Ok((grid, m))
}

pub(crate) struct GridSnf {
    /// `(row, col, valuation in grid units)` in elimination order.
    pub pivots: Vec<(usize, usize, usize)>,
    pub free_rows: Vec<usize>,
    pub free_cols: Vec<usize>,
    pub transforms: Option<Transforms>,
}

pub(crate) struct Transforms {
    pub u: GridMatrix,
    pub u_inv: GridMatrix,
    pub v: GridMatrix,
}

/// Greedy Smith normal form: pivot on an entry of least valuation (ties to
/// the lexicographically first position), make it a monomial, clear its row
/// and column.
pub(crate) fn grid_snf(grid: &Grid, mut m: GridMatrix, track: bool) -> GridSnf {
    let (rows, cols) = (m.rows, m.cols);
    let mut tr = track.then(|| Transforms {
        u: GridMatrix::identity(grid, rows),
        u_inv: GridMatrix::identity(grid, rows),
        v: GridMatrix::identity(grid, cols),
    });
    let mut free_rows: Vec<usize> = (0..rows).collect();
    let mut free_cols: Vec<usize> = (0..cols).collect();
    let mut pivots = Vec::new();
    while let Some((v, r, c)) = m.min_valuation_in(&free_rows, &free_cols) {
        let unit = grid.shift_down(m.get(r, c), v);
        if Grid::popcount(&unit) != 1 {
            let inv = grid.inv_unit(&unit);
            m.row_scale(grid, r, &inv);
            if let Some(t) = tr.as_mut() {
                t.u.row_scale(grid, r, &inv);
                t.u_inv.col_scale(grid, r, &unit);
            }
        }
        for &i in &free_rows {
            if i == r || Grid::is_zero(m.get(i, c)) {
                continue;
            }
            let f = grid.shift_down(m.get(i, c), v);
            m.row_axpy(grid, i, r, &f);
            if let Some(t) = tr.as_mut() {
                t.u.row_axpy(grid, i, r, &f);
                t.u_inv.col_axpy(grid, r, i, &f);
            }
        }
        for &j in &free_cols {
            if j == c || Grid::is_zero(m.get(r, j)) {
                continue;
            }
            let g = grid.shift_down(m.get(r, j), v);
            m.col_axpy(grid, j, c, &g);
            if let Some(t) = tr.as_mut() {
                t.v.col_axpy(grid, j, c, &g);
            }
        }
        free_rows.retain(|&i| i != r);
        free_cols.retain(|&j| j != c);
        pivots.push((r, c, v));
    }
    GridSnf {
        pivots,
        free_rows,
        free_cols,
        transforms: tr,
    }
}

/// Spectral values by residue exchange.
///
/// Keeps images `w_i` of source vectors whose leading residues are
/// independent over `F_2`. A new image is reduced against pairs of lower or
/// equal level; when that is impossible it displaces the highest-level pair
/// it depends on, which is then reinserted.
pub(crate) fn exchange_levels(grid: &Grid, m: &GridMatrix) -> Vec<usize> {
    assert!(m.rows <= 128, "exchange route supports at most 128 target rows");
    struct Pair {
        w: Vec<Vec<u64>>,
        level: usize,
        residue: u128,
    }
    let residue_at = |w: &[Vec<u64>], level: usize| -> u128 {
        w.iter().enumerate().fold(0u128, |acc, (i, x)| {
            acc | ((((x[level / 64] >> (level % 64)) & 1) as u128) << i)
        })
    };
    let leading = |w: &[Vec<u64>]| -> Option<usize> { w.iter().filter_map(|x| Grid::valuation(x)).min() };
    // Which existing residues sum to `target`? `None` if independent.
    let solve = |pairs: &[Pair], target: u128| -> Option<Vec<usize>> {
        let mut basis: Vec<(u128, u128)> = Vec::new();
        for (k, p) in pairs.iter().enumerate() {
            let (mut r, mut combo) = (p.residue, 1u128 << k);
            for &(b, bc) in &basis {
                if r & (1u128 << (127 - b.leading_zeros())) != 0 {
                    r ^= b;
                    combo ^= bc;
                }
            }
            debug_assert!(r != 0);
            basis.push((r, combo));
            basis.sort_by_key(|&(b, _)| std::cmp::Reverse(127 - b.leading_zeros()));
        }
        let (mut r, mut combo) = (target, 0u128);
        for &(b, bc) in &basis {
            if r & (1u128 << (127 - b.leading_zeros())) != 0 {
                r ^= b;
                combo ^= bc;
            }
        }
        (r == 0).then(|| (0..pairs.len()).filter(|&k| combo >> k & 1 == 1).collect())
    };

    let mut pairs: Vec<Pair> = Vec::new();
    let mut queue: Vec<Vec<Vec<u64>>> = (0..m.cols)
        .rev()
        .map(|j| (0..m.rows).map(|i| m.get(i, j).to_vec()).collect())
        .collect();
    while let Some(mut w) = queue.pop() {
        loop {
            let Some(level) = leading(&w) else { break };
            let residue = residue_at(&w, level);
            match solve(&pairs, residue) {
                None => {
                    pairs.push(Pair { w, level, residue });
                    break;
                }
                Some(deps) => {
                    let top = deps.iter().copied().max_by_key(|&k| (pairs[k].level, k)).unwrap();
                    if pairs[top].level <= level {
                        for &k in &deps {
                            let shift = level - pairs[k].level;
                            for (x, y) in w.iter_mut().zip(&pairs[k].w) {
                                grid.add_shifted(x, y, shift);
                            }
                        }
                    } else {
                        let old = std::mem::replace(&mut pairs[top], Pair { w, level, residue });
                        w = old.w;
                    }
                }
            }
        }
    }
    let mut levels: Vec<usize> = pairs.iter().map(|p| p.level).collect();
    levels.sort_unstable();
    levels
}

impl FilteredMap {
    pub fn new(source: FilteredSpace, target: FilteredSpace, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but spaces have dimensions {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        Ok(FilteredMap {
            source,
            target,
            matrix,
        })
    }

    /// Matrix in the orthonormal bases; fails unless the map is filtered.
    pub fn orthonormalized(&self) -> Result<Matrix> {
        orthonormalized_matrix(self.source.filtration(), self.target.filtration(), &self.matrix)
    }

    /// `inf_v (A(v) − A(Dv))`: least valuation of the orthonormalized
    /// matrix, `+∞` for the zero map. Negative when the map is not filtered.
    pub fn filtration_drop(&self) -> Valuation {
        shifted_matrix(self.source.filtration(), self.target.filtration(), &self.matrix)
            .min_valuation()
    }

    pub fn is_filtered(&self) -> bool {
        match self.filtration_drop() {
            Valuation::Finite(v) => !v.is_negative(),
            Valuation::Infinite => true,
        }
    }

    fn working_precision(&self, bar: &Matrix, precision: Option<&Exponent>) -> Exponent {
        precision.cloned().unwrap_or_else(|| certifying_precision(bar))
    }

    /// Spectral value decomposition via the greedy Smith normal form.
    ///
    /// Without an explicit precision one is chosen large enough that every
    /// value is certified; otherwise only values below `precision` are exact
    /// and pairs beyond it show up as kernel/cokernel.
    pub fn uz_decompose(&self, precision: Option<&Exponent>) -> Result<SpectralValueDecomposition> {
        let bar = self.orthonormalized()?;
        let prec = self.working_precision(&bar, precision);
        let (grid, m) = grid_setup(&bar, &prec, &[])?;
        let snf = grid_snf(&grid, m, true);
        let t = snf.transforms.expect("transforms were requested");
        let (u, u_inv, v) = (
            from_grid_matrix(&grid, &t.u),
            from_grid_matrix(&grid, &t.u_inv),
            from_grid_matrix(&grid, &t.v),
        );
        let src = self.source.filtration();
        let tgt = self.target.filtration();
        let raw = |m: &Matrix, col: usize, levels: &[Exponent]| -> Vec<NovikovScalar> {
            (0..m.rows()).map(|i| m.get(i, col).shift(&levels[i])).collect()
        };
        let mut pairs: Vec<SpectralPair> = snf
            .pivots
            .iter()
            .map(|&(r, c, k)| SpectralPair {
                source: raw(&v, c, src),
                target: raw(&u_inv, r, tgt),
                value: grid.units_to_exponent(k as i64),
            })
            .collect();
        pairs.sort_by(|a, b| a.value.cmp(&b.value));
        let diagonal = snf
            .pivots
            .iter()
            .map(|&(r, c, k)| (r, c, grid.units_to_exponent(k as i64)))
            .collect();
        Ok(SpectralValueDecomposition {
            pairs,
            kernel: snf.free_cols.iter().map(|&c| raw(&v, c, src)).collect(),
            cokernel: snf.free_rows.iter().map(|&r| raw(&u_inv, r, tgt)).collect(),
            precision: grid.precision(),
            certificate: SnfCertificate {
                u,
                u_inv,
                v,
                diagonal,
                precision: grid.precision(),
            },
        })
    }

    /// Sorted spectral values from the greedy Smith normal form, without
    /// building the transforms.
    pub fn spectral_values(&self, precision: Option<&Exponent>) -> Result<Vec<Exponent>> {
        let bar = self.orthonormalized()?;
        let prec = self.working_precision(&bar, precision);
        let (grid, m) = grid_setup(&bar, &prec, &[])?;
        let snf = grid_snf(&grid, m, false);
        let mut out: Vec<Exponent> = snf
            .pivots
            .iter()
            .map(|&(_, _, k)| grid.units_to_exponent(k as i64))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Sorted spectral values by residue exchange, an elimination-free route
    /// used to cross-check the Smith normal form.
    pub fn spectral_values_by_exchange(&self, precision: Option<&Exponent>) -> Result<Vec<Exponent>> {
        let bar = self.orthonormalized()?;
        let prec = self.working_precision(&bar, precision);
        let (grid, m) = grid_setup(&bar, &prec, &[])?;
        Ok(exchange_levels(&grid, &m)
            .into_iter()
            .map(|k| grid.units_to_exponent(k as i64))
            .collect())
    }

    /// Sorted spectral values of a map that need not be filtered: the matrix
    /// is first multiplied by `T^s` with `s = −𝒜(D)`, then `s` is subtracted.
    pub fn spectral_values_unfiltered(&self, precision: Option<&Exponent>) -> Result<Vec<Exponent>> {
        let s = match self.filtration_drop() {
            Valuation::Finite(v) if v.is_negative() => -v,
            _ => return self.spectral_values(precision),
        };
        let shifted = FilteredMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.shift(&s),
        };
        let shifted_precision = precision.map(|p| p + &s);
        Ok(shifted
            .spectral_values(shifted_precision.as_ref())?
            .into_iter()
            .map(|b| &b - &s)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn space(levels: &[(i64, i64)]) -> FilteredSpace {
        FilteredSpace::anonymous(levels.iter().map(|&(n, d)| e(n, d)).collect())
    }

    fn scalar(s: &str) -> NovikovScalar {
        s.parse().unwrap()
    }

    #[test]
    fn filtration_of_examples() {
        let one = space(&[(2, 1)]);
        assert_eq!(one.filtration_of(&[scalar("1")]), Some(e(2, 1)));
        assert_eq!(one.filtration_of(&[scalar("T")]), Some(e(1, 1)));
        assert_eq!(one.filtration_of(&[NovikovScalar::zero()]), None);
        let two = space(&[(2, 1), (5, 1)]);
        assert_eq!(two.filtration_of(&[scalar("1"), scalar("1")]), Some(e(5, 1)));
    }

    #[test]
    fn orthonormalize_examples() {
        assert_eq!(space(&[(1, 2)]).orthonormalize(), vec![e(1, 2)]);
        assert_eq!(space(&[(2, 1), (1, 2)]).orthonormalize(), vec![e(2, 1), e(1, 2)]);
    }

    fn map(rows: &[&[&str]], src: &[(i64, i64)], tgt: &[(i64, i64)]) -> FilteredMap {
        FilteredMap::new(space(src), space(tgt), Matrix::parse_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn uz_examples() {
        let id = map(&[&["1"]], &[(0, 1)], &[(0, 1)]);
        assert_eq!(id.uz_decompose(None).unwrap().values(), vec![e(0, 1)]);
        let t3 = map(&[&["T^3"]], &[(0, 1)], &[(0, 1)]);
        assert_eq!(t3.uz_decompose(None).unwrap().values(), vec![e(3, 1)]);
        let two = map(&[&["1", "1"], &["T", "0"]], &[(0, 1), (0, 1)], &[(0, 1), (0, 1)]);
        let svd = two.uz_decompose(None).unwrap();
        assert_eq!(svd.values(), vec![e(0, 1), e(1, 1)]);
        svd.certificate.verify(&two.orthonormalized().unwrap()).unwrap();
        assert_eq!(two.spectral_values_by_exchange(None).unwrap(), svd.values());
    }

    #[test]
    fn pairs_satisfy_defining_identity() {
        let d = map(
            &[&["1 + T^{1/2}", "T"], &["T^{3/2}", "T^{1/3}"]],
            &[(1, 1), (2, 1)],
            &[(1, 2), (1, 1)],
        );
        let svd = d.uz_decompose(None).unwrap();
        for pair in &svd.pairs {
            let col = Matrix::from_fn(2, 1, |i, _| pair.source[i].clone());
            let image = d.matrix.mul(&col).unwrap();
            for i in 0..2 {
                let expect = pair.target[i].shift(&pair.value);
                assert!(image.get(i, 0).agrees_below(&expect, &svd.precision));
            }
            // Source vectors are unit vectors for the source filtration,
            // target vectors unit vectors for the target filtration.
            assert_eq!(d.source.filtration_of(&pair.source), Some(e(0, 1)));
            assert_eq!(d.target.filtration_of(&pair.target), Some(e(0, 1)));
        }
    }

    #[test]
    fn non_filtered_is_rejected() {
        let up = map(&[&["1"]], &[(0, 1)], &[(1, 1)]);
        assert!(matches!(up.orthonormalized(), Err(Error::NotFiltered { .. })));
        assert_eq!(up.filtration_drop(), Valuation::Finite(e(-1, 1)));
        assert_eq!(up.spectral_values_unfiltered(None).unwrap(), vec![e(-1, 1)]);
    }

    #[test]
    fn rank_deficient_map() {
        let d = map(&[&["1", "1"], &["1", "1"]], &[(0, 1), (0, 1)], &[(0, 1), (0, 1)]);
        let svd = d.uz_decompose(None).unwrap();
        assert_eq!(svd.rank(), 1);
        assert_eq!(svd.kernel.len(), 1);
        assert_eq!(svd.cokernel.len(), 1);
        assert_eq!(d.spectral_values_by_exchange(None).unwrap(), vec![e(0, 1)]);
    }

    #[test]
    fn finite_input_precision_is_enforced() {
        let x = scalar("T").with_precision(Valuation::Finite(e(2, 1)));
        let m = Matrix::from_fn(1, 1, |_, _| x.clone());
        let d = FilteredMap::new(space(&[(0, 1)]), space(&[(0, 1)]), m).unwrap();
        assert!(d.spectral_values(Some(&e(2, 1))).is_ok());
        assert!(matches!(
            d.spectral_values(Some(&e(3, 1))),
            Err(Error::PrecisionExhausted { .. })
        ));
    }
}
