//! Deformation checks: spectra below the size of a perturbation agree, with
//! and without a cone, and the high-case elimination can be replayed.

use novikov_spectra::cone::{check_deformation_basic, DeformationCase};
use novikov_spectra::random::{random_instance, ExponentPool, InstanceKind};
use novikov_spectra::Result;

fn main() -> Result<()> {
    let pool = ExponentPool::default();

    let basic = random_instance(11, 6, &pool, InstanceKind::Basic)?;
    let report = check_deformation_basic(&basic.base0, &basic.base, &basic.big_a, None)?;
    println!("A = {}, 𝒜(d − d0) = {}", report.bound, report.perturbation);
    println!("  d0: {}\n  d:  {}", report.spectrum0, report.spectrum);
    println!("  agree below A: {:?}", report.matched);

    let low = random_instance(15, 4, &pool, InstanceKind::Low)?;
    let r = low.deformation().check(DeformationCase::Low, None, false)?;
    println!("low case (a = {}): first {} entries agree", low.a, r.verified);

    let high = random_instance(13, 4, &pool, InstanceKind::High)?;
    let r = high.deformation().check(DeformationCase::High, None, true)?;
    println!("high case (σ = {}, a = {}, A = {}): first {} entries agree", high.sigma, high.a, high.big_a, r.verified);
    if let Some(t) = r.transcript {
        for (label, m) in &t.stages {
            println!("  {label}: {}x{}", m.rows(), m.cols());
        }
        println!("  pivot values {:?}", t.values);
    }
    Ok(())
}
