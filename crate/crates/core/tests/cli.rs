use std::path::PathBuf;

use novikov_spectra::cli::run;
use novikov_spectra::io::ComplexDocument;
use novikov_spectra::random::{random_instance, ExponentPool, InstanceKind};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn novikov(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("novikov").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn machine(args: &[&str]) -> (i32, Vec<String>) {
    let mut full = vec!["--format", "machine"];
    full.extend_from_slice(args);
    let (code, out, _) = novikov(&full);
    (code, out.lines().map(str::to_string).collect())
}

fn has(lines: &[String], line: &str) -> bool {
    lines.iter().any(|l| l == line)
}

#[test]
fn cross_bounds_circle() {
    let (code, lines) = machine(&["cross-bounds", "--family", "sn", "--n", "1"]);
    assert_eq!(code, 0);
    for l in ["c=1/2", "beta_bound=1/2", "gamma_bound=3/4", "C=3/2", "s_star=1/3"] {
        assert!(has(&lines, l), "{l}: {lines:?}");
    }
}

#[test]
fn empty_barcode() {
    let (code, lines) = machine(&["barcode", &data("empty.json")]);
    assert_eq!(code, 0);
    assert!(has(&lines, "bar_count=0"));
}

#[test]
fn two_generator_barcode() {
    let (code, lines) = machine(&["barcode", &data("two_generator.json")]);
    assert_eq!(code, 0, "{lines:?}");
    assert!(has(&lines, "bar_count=1"));
    assert!(has(&lines, "spectrum={3/2} + 0 infinite"), "{lines:?}");
}

#[test]
fn input_errors_exit_3() {
    let (code, _, err) = novikov(&["barcode", &data("duplicate.json")]);
    assert_eq!(code, 3);
    assert!(err.contains("generators[1].name"), "{err}");
    let (code, out, err) = novikov(&["validate", &data("not_chain.json")]);
    assert_eq!(code, 3);
    assert!(out.contains("d_squared") && err.contains("invalid complex"), "{out}\n{err}");
    assert_eq!(novikov(&["barcode", &data("missing.json")]).0, 3);
    assert_eq!(novikov(&["no-such-command"]).0, 3);
}

#[test]
fn hypothesis_failures_exit_1() {
    // (a^1)^1 is not a power of q in a ring of rank 2.
    let (code, _, err) = novikov(&["root-bounds", "--family", "sn", "--n", "1", "--values", "0,0", "--nonneg", "--m", "1", "--k", "1"]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = novikov(&["product-bound", "--family", "sn", "--n", "1", "--family", "cpn", "--n", "1", "--beta", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn split_and_cone() {
    let (code, lines) = machine(&["split", &data("two_generator.json"), "--sigma", "5"]);
    assert_eq!(code, 0, "{lines:?}");
    assert!(has(&lines, "low=[3/2,3/2]"), "{lines:?}");
    assert!(has(&lines, "infinite=0"));
    let (code, out, _) = novikov(&["cone", &data("two_generator.json"), "--sigma", "5"]);
    assert_eq!(code, 0);
    let doc = ComplexDocument::parse(&out).unwrap().build().unwrap();
    assert_eq!(doc.complex.dim(), 4);
    assert!(doc.complex.validate().is_valid());
}

#[test]
fn barcode_distances() {
    let (a, b) = (data("bars_short.json"), data("bars_long.json"));
    let (code, lines) = machine(&["bottleneck", &a, &b]);
    assert_eq!(code, 0);
    assert!(has(&lines, "distance=1"), "{lines:?}");
    let (_, shifted) = machine(&["bottleneck-shift", &a, &b]);
    assert!(has(&shifted, "distance=1/2") && has(&shifted, "shift=-1/2"), "{shifted:?}");
    let (_, flag) = machine(&["bottleneck", "--mod-shift", &a, &b]);
    assert_eq!(flag, shifted);
}

#[test]
fn lsv_count() {
    let (code, lines) = machine(&["lsv-count", &data("periodic.json")]);
    assert_eq!(code, 0, "{lines:?}");
    assert!(has(&lines, "period_action=1/2") && has(&lines, "long_bars=1"), "{lines:?}");
    let get = |k: &str| lines.iter().find_map(|l| l.strip_prefix(&format!("{k}="))).unwrap().to_string();
    assert_eq!(get("x_total"), get("x_window"));
}

#[test]
fn mult_spectrum_and_roots() {
    let (code, lines) = machine(&["mult-spectrum", "--family", "sn", "--n", "1", "--values", "0,-1/8", "--nonneg"]);
    assert_eq!(code, 0, "{lines:?}");
    assert!(has(&lines, "spectrum=[1/8,3/8]") && has(&lines, "gamma=1/8"), "{lines:?}");
    let (code, lines) = machine(&["root-bounds", "--family", "sn", "--n", "1", "--values", "0,0", "--nonneg", "--m", "2", "--k", "1"]);
    assert_eq!(code, 0);
    assert!(has(&lines, "beta_top=1/2") && has(&lines, "bound_ceiling=1/4"), "{lines:?}");
    let (code, lines) = machine(&["product-bound", "--family", "sn", "--n", "1", "--family", "sn", "--n", "1", "--beta", "0"]);
    assert_eq!(code, 0);
    assert!(has(&lines, "bound=1"));
}

#[test]
fn random_suite_summary() {
    let (code, lines) = machine(&["random-suite", "--prop", "deformation", "--seeds", "40"]);
    assert_eq!(code, 0, "{lines:?}");
    assert!(has(&lines, "assertion_failures=0") && has(&lines, "passed=40"));
    assert_eq!(novikov(&["random-suite", "--prop", "nonsense"]).0, 3);
}

#[test]
fn deform_commands_on_generated_instances() {
    let dir = std::env::temp_dir().join(format!("novikov-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pool = ExponentPool::default();

    let r = random_instance(3, 4, &pool, InstanceKind::Low).unwrap();
    let doc = ComplexDocument::from_complex(
        &r.base,
        &[("d0", r.base0.differential()), ("D0", &r.map0), ("D", &r.map)],
    );
    let path = dir.join("low.json");
    std::fs::write(&path, doc.to_json()).unwrap();
    let (sigma, a, big_a) = (r.sigma.to_string(), r.a.to_string(), r.big_a.to_string());
    let (code, out, err) = novikov(&[
        "deform-cone", path.to_str().unwrap(), "--case", "low", "--sigma", &sigma, "--a", &a, "--big-a", &big_a,
    ]);
    assert_eq!(code, 0, "{out}{err}");
    // Swapping the two bounds breaks A > a.
    let (code, _, _) = novikov(&[
        "deform-cone", path.to_str().unwrap(), "--case", "low", "--sigma", &sigma, "--a", &big_a, "--big-a", &a,
    ]);
    assert_eq!(code, 1);

    let r = random_instance(5, 5, &pool, InstanceKind::Basic).unwrap();
    let (p0, p1) = (dir.join("basic0.json"), dir.join("basic1.json"));
    std::fs::write(&p0, ComplexDocument::from_complex(&r.base0, &[]).to_json()).unwrap();
    std::fs::write(&p1, ComplexDocument::from_complex(&r.base, &[]).to_json()).unwrap();
    let (code, out, err) = novikov(&[
        "deform-basic", p0.to_str().unwrap(), p1.to_str().unwrap(), "--bound", &r.big_a.to_string(),
    ]);
    assert_eq!(code, 0, "{out}{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn plot_writes_svg() {
    let (code, out, _) = novikov(&["plot", "--complex", &data("two_generator.json"), "--title", "two generators"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<svg") && out.contains("two generators"));
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        &["barcode", &data("four_generator.json")][..],
        &["--format", "machine", "split", &data("two_generator.json")][..],
        &["random-suite", "--prop", "bottleneck", "--seeds", "20"][..],
    ] {
        assert_eq!(novikov(args), novikov(args));
    }
}
