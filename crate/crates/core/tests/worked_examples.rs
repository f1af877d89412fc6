use novikov_spectra::complex::FilteredComplex;
use novikov_spectra::cone::{build_cone, check_deformation_basic};
use novikov_spectra::cross::{mult_spectrum, CrossRing, Family, SpectralFiltration};
use novikov_spectra::filtered::{FilteredMap, FilteredSpace};
use novikov_spectra::io::read_complex;
use novikov_spectra::matrix::Matrix;
use novikov_spectra::{Exponent, NovikovScalar};

fn q(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}

fn data(name: &str) -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

#[test]
fn projective_plane_square_of_generator() {
    // QH = Λ[a]/(a³ = q), ν(q) = 1/2, levels (0, 1/10, 1/5), multiplication by a².
    let c = [q(0, 1), q(1, 10), q(1, 5)];
    let half = q(1, 2);
    // Explicit matrix: a^j ↦ T^{w/2} a^{(j+2) mod 3} with w = ⌊(j+2)/3⌋.
    let m = Matrix::from_fn(3, 3, |i, j| {
        if i == (j + 2) % 3 {
            NovikovScalar::monomial(&half * &Exponent::integer(((j + 2) / 3) as i64))
        } else {
            NovikovScalar::zero()
        }
    });
    let space = FilteredSpace::anonymous(c.to_vec());
    let oracle = FilteredMap::new(space.clone(), space, m)
        .unwrap()
        .spectral_values_unfiltered(None)
        .unwrap();
    assert_eq!(oracle, vec![q(-1, 5), q(3, 5), q(3, 5)]);
    let f = SpectralFiltration::new(CrossRing::new(Family::CPn, 2).unwrap(), c.to_vec(), false).unwrap();
    assert_eq!(mult_spectrum(&f, 2).unwrap(), oracle);
    // The ordering of the levels has a negative step, so the guard rejects it.
    assert!(SpectralFiltration::new(CrossRing::new(Family::CPn, 2).unwrap(), c.to_vec(), true).is_err());
}

#[test]
fn four_generator_complex() {
    let c = read_complex(&data("four_generator.json")).unwrap().complex;
    let spectrum = c.length_spectrum(None).unwrap();
    assert_eq!((spectrum.finite.clone(), spectrum.infinite), (vec![q(1, 1), q(3, 1)], 0));
    assert_eq!(c.boundary_depth(None).unwrap(), q(3, 1));
    // Positive spectral values of d as a map are the bar lengths.
    let mut values: Vec<Exponent> = c.as_map().uz_decompose(None).unwrap().values();
    values.retain(|v| v.is_positive());
    assert_eq!(values, spectrum.finite);
}

#[test]
fn deformation_below_the_perturbation() {
    // x (0), y (5), z (10); d0 y = x, and M z = x has 𝒜(M) = 10.
    let space = FilteredSpace::anonymous(vec![q(0, 1), q(5, 1), q(10, 1)]);
    let d0 = Matrix::parse_rows(&[&["0", "1", "0"], &["0", "0", "0"], &["0", "0", "0"]]).unwrap();
    let d = Matrix::parse_rows(&[&["0", "1", "1"], &["0", "0", "0"], &["0", "0", "0"]]).unwrap();
    let c0 = FilteredComplex::new(space.clone(), d0).unwrap();
    let c = FilteredComplex::new(space, d).unwrap();
    let report = check_deformation_basic(&c0, &c, &q(10, 1), None).unwrap();
    assert_eq!(report.matched, vec![q(5, 1)]);
    assert!(check_deformation_basic(&c0, &c, &q(11, 1), None).is_err());
}

#[test]
fn cone_of_identity_on_acyclic_pair() {
    let parsed = read_complex(&data("two_generator.json")).unwrap();
    let (c, id) = (&parsed.complex, parsed.map("D").unwrap());
    let split = build_cone(c, c, id, &q(5, 1)).unwrap().split_spectrum(None).unwrap();
    assert_eq!(split.low, vec![q(3, 2), q(3, 2)]);
    assert!(split.high.is_empty() && split.infinite == 0);
    // At σ = 0 the sum s.x + t.y has level 2 and bounds d(s.y), so nothing survives.
    let flat = build_cone(c, c, id, &Exponent::zero()).unwrap();
    assert!(flat.cone.barcode(None).unwrap().is_empty());
}
