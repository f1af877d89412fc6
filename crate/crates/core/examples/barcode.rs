//! Barcode of a small filtered complex, read from its normal form.

use novikov_spectra::complex::FilteredComplex;
use novikov_spectra::filtered::FilteredSpace;
use novikov_spectra::matrix::Matrix;
use novikov_spectra::{Exponent, Result};

fn main() -> Result<()> {
    // x1, x2 at level 0; y1 at 1, y2 at 3; d y1 = x1 + x2, d y2 = x2 + T^{1/2} x1.
    let space = FilteredSpace::new(
        ["x1", "x2", "y1", "y2"].map(String::from).to_vec(),
        vec![Exponent::zero(), Exponent::zero(), Exponent::integer(1), Exponent::integer(3)],
    )?
    .with_grading(vec![0, 0, 1, 1])?;
    let d = Matrix::parse_rows(&[
        &["0", "0", "1", "T^{1/2}"],
        &["0", "0", "1", "1"],
        &["0", "0", "0", "0"],
        &["0", "0", "0", "0"],
    ])?;
    let c = FilteredComplex::new(space, d)?;
    c.ensure_valid()?;

    let nf = c.normal_form(None)?;
    println!("working precision {}", nf.precision);
    for p in &nf.pairs {
        println!("d {} ~ T^{} {}", c.space().name(p.zeta), p.length, c.space().name(p.eta));
    }
    println!("barcode: {}", c.barcode(None)?);
    println!("length spectrum: {}", c.length_spectrum(None)?);
    println!("boundary depth: {}", c.boundary_depth(None)?);
    Ok(())
}
