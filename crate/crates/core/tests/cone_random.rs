use novikov_spectra::cone::{build_cone, check_deformation_basic, DeformationCase};
use novikov_spectra::random::{random_instance, ExponentPool, InstanceKind};

#[test]
fn split_spectrum_on_random_complexes() {
    let pool = ExponentPool::default();
    for seed in 0..60 {
        let r = random_instance(seed, 6, &pool, InstanceKind::Split).unwrap();
        let cone = build_cone(&r.base, &r.base, &r.map, &r.sigma).unwrap();
        let split = cone.split_spectrum(None).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let known = r.known_lengths.unwrap();
        let mut doubled: Vec<_> = known.iter().chain(&known).cloned().collect();
        doubled.sort();
        assert_eq!(split.low, doubled, "seed {seed}");
    }
}

#[test]
fn deformation_checks_on_random_instances() {
    let pool = ExponentPool::default();
    for seed in 0..40 {
        let r = random_instance(seed, 6, &pool, InstanceKind::Basic).unwrap();
        check_deformation_basic(&r.base0, &r.base, &r.big_a, None)
            .unwrap_or_else(|e| panic!("basic seed {seed}: {e}"));
        for (kind, case) in [(InstanceKind::Low, DeformationCase::Low), (InstanceKind::High, DeformationCase::High)] {
            let r = random_instance(seed, 6, &pool, kind).unwrap();
            r.deformation()
                .check(case, None, false)
                .unwrap_or_else(|e| panic!("{kind:?} seed {seed}: {e}"));
        }
    }
}
