//! Constants of the four ring families, a multiplication spectrum and the
//! root-of-unity bounds.

use novikov_spectra::cross::{
    check_root_of_unity_bounds, gamma_from_filtration, mult_spectrum, ring_constants, product_bound, CrossRing,
    Family, SpectralFiltration,
};
use novikov_spectra::{Exponent, Result};

fn main() -> Result<()> {
    println!("{:<6}{:>3}{:>8}{:>10}{:>10}{:>10}{:>8}", "family", "n", "c", "β bound", "γ bound", "C", "s*");
    for family in Family::ALL {
        for n in 1..=3 {
            let ring = CrossRing::new(family, n)?;
            let k = ring_constants(&ring);
            println!(
                "{:<6}{:>3}{:>8}{:>10}{:>10}{:>10}{:>8}",
                family.to_string(),
                n,
                k.c.to_string(),
                k.beta_bound.to_string(),
                k.gamma_bound.to_string(),
                k.ambient.to_string(),
                k.s_star.to_string()
            );
        }
    }

    let ring = CrossRing::new(Family::CPn, 3)?;
    let values = vec![Exponent::zero(), Exponent::new(-1, 10), Exponent::new(-1, 5), Exponent::new(-1, 4)];
    let f = SpectralFiltration::new(ring.clone(), values, true)?;
    println!("spectrum of a: {:?}", mult_spectrum(&f, 1)?);
    println!("γ = β_1 of [pt]: {}", gamma_from_filtration(&f)?);
    // a has codegree 2; a^4 = q, so m = 4.
    let r = check_root_of_unity_bounds(&f, 4, ring.generator_codegree())?;
    println!("β_B = {} ≤ {}, β_⌈B/m⌉ = {} ≤ {}", r.beta_top, r.bound_top, r.beta_ceiling, r.bound_ceiling);

    let s1 = CrossRing::new(Family::Sn, 1)?;
    println!("S¹ × S¹ bound at β = 0: {}", product_bound(&[s1.clone(), s1], &Exponent::zero())?);
    Ok(())
}
