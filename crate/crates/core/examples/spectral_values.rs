//! Spectral values of a filtered map, three ways, plus the Smith certificate.

use novikov_spectra::filtered::{FilteredMap, FilteredSpace};
use novikov_spectra::matrix::Matrix;
use novikov_spectra::{Exponent, Result};

fn main() -> Result<()> {
    let source = FilteredSpace::anonymous(vec![Exponent::integer(2), Exponent::new(1, 2)]);
    let target = FilteredSpace::anonymous(vec![Exponent::zero(), Exponent::new(1, 3)]);
    let m = Matrix::parse_rows(&[&["T^2 + T^3", "T"], &["T^{5/3}", "T^{1/6}"]])?;
    let map = FilteredMap::new(source, target, m)?;
    println!("filtration drop: {}", map.filtration_drop());

    let dec = map.uz_decompose(None)?;
    dec.certificate.verify(&map.orthonormalized()?)?;
    println!("Smith values:     {:?} (exact below {})", dec.values(), dec.precision);
    println!("exchange values:  {:?}", map.spectral_values_by_exchange(None)?);
    for p in &dec.pairs {
        println!("D {:?} = T^{} {:?}", p.source, p.value, p.target);
    }
    Ok(())
}
