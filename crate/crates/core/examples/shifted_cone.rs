//! The cone of a chain map shifted by σ separates into the spectrum of the
//! complex (twice) and the spectral values of the induced map, moved up by σ.

use novikov_spectra::cone::{build_cone, suggest_sigma};
use novikov_spectra::random::{random_instance, ExponentPool, InstanceKind};
use novikov_spectra::Result;

fn main() -> Result<()> {
    let r = random_instance(13, 5, &ExponentPool::default(), InstanceKind::Split)?;
    println!("complex barcode: {}", r.base.barcode(None)?);
    let sigma = suggest_sigma(&r.base)?;
    for s in [sigma.clone(), &sigma + &sigma] {
        let cone = build_cone(&r.base, &r.base, &r.map, &s)?;
        let split = cone.split_spectrum(None)?;
        println!("σ = {s}");
        println!("  low            {:?}", split.low);
        println!("  high − σ       {:?}", split.high_minus_shift());
        println!("  homology map   {:?}", split.homology_values);
        println!("  infinite bars  {}", split.infinite);
    }
    Ok(())
}
