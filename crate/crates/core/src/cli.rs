//! Command-line front end. The `novikov` binary only forwards to [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::barcode::Barcode;
use crate::complex::FilteredComplex;
use crate::cone::{build_cone, check_deformation_basic, suggest_sigma, ConeDeformation, DeformationCase};
use crate::cross::{
    check_root_of_unity_bounds, gamma_from_filtration, mult_spectrum, ring_constants, product_bound, CrossRing,
    Family, SpectralFiltration,
};
use crate::error::{Error, Result};
use crate::io::{read_barcode, read_complex, read_periodic, ComplexDocument};
use crate::novikov::Exponent;
use crate::persistence::{bottleneck, bottleneck_mod_shift, lsv_endpoint_count, Matching};
use crate::plot::barcode_svg;
use crate::suite::{run_suite, Property};

#[derive(Parser, Debug)]
#[command(name = "novikov", version, about = "Filtered complexes over the Novikov field: barcodes, cones, spectra")]
struct Cli {
    /// `text` for people, `machine` for line-oriented key=value output.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    Low,
    High,
}

#[derive(Args, Debug)]
struct RingArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: u32,
}

#[derive(Args, Debug)]
struct FiltrationArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Comma-separated values `c_0,…,c_{B−1}`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Vec<Exponent>,
    /// Reject filtrations with a negative step `c_j − c_{j+1}`.
    #[arg(long)]
    nonneg: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check d² = 0, filtration and grading, and report witnesses.
    Validate { file: PathBuf },
    /// Barcode of a complex.
    Barcode {
        file: PathBuf,
        #[arg(long)]
        precision: Option<Exponent>,
    },
    /// Write the shifted cone of a chain map as a complex document.
    Cone {
        file: PathBuf,
        /// Name of the chain map in the document's `maps` section.
        #[arg(long, default_value = "D")]
        map: String,
        #[arg(long)]
        sigma: Exponent,
    },
    /// Split the cone spectrum at σ and check it against its pieces.
    Split {
        file: PathBuf,
        #[arg(long, default_value = "D")]
        map: String,
        /// Defaults to the certified threshold σ*.
        #[arg(long)]
        sigma: Option<Exponent>,
        #[arg(long)]
        precision: Option<Exponent>,
    },
    /// Compare the spectra of two differentials on one space below a bound.
    DeformBasic {
        base: PathBuf,
        deformed: PathBuf,
        #[arg(long)]
        bound: Exponent,
        #[arg(long)]
        precision: Option<Exponent>,
    },
    /// Deformation check for shifted cones. The document holds `d` as its
    /// differential and maps `d0`, `D0`, `D`.
    DeformCone {
        file: PathBuf,
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        sigma: Exponent,
        #[arg(long)]
        a: Exponent,
        #[arg(long = "big-a")]
        big_a: Exponent,
        #[arg(long)]
        precision: Option<Exponent>,
        /// Print the elimination stages (high case only).
        #[arg(long)]
        transcript: bool,
    },
    /// Bottleneck distance between two barcodes.
    Bottleneck {
        left: PathBuf,
        right: PathBuf,
        /// Minimize over shifts of the second barcode.
        #[arg(long)]
        mod_shift: bool,
    },
    /// Bottleneck distance modulo shifts.
    BottleneckShift { left: PathBuf, right: PathBuf },
    /// Endpoint count of a periodic barcode.
    LsvCount { file: PathBuf },
    /// Spectral values of multiplication by a power of the generator.
    MultSpectrum {
        #[command(flatten)]
        filtration: FiltrationArgs,
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// Root-of-unity bounds for `a^p` of codegree `k` with `(a^p)^m` a power of `q`.
    RootBounds {
        #[command(flatten)]
        filtration: FiltrationArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
    },
    /// Closed-form constants of a ring.
    CrossBounds {
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Bound for a product of rings; repeat `--family`/`--n` per factor.
    ProductBound {
        #[arg(long, required = true)]
        family: Vec<Family>,
        #[arg(long, required = true)]
        n: Vec<u32>,
        #[arg(long)]
        beta: Exponent,
    },
    /// Run a seeded property over a range of seeds.
    RandomSuite {
        #[arg(long)]
        prop: Property,
        /// Number of seeds.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Render a barcode (or the barcode of a complex) as SVG.
    Plot {
        file: PathBuf,
        /// The input is a complex document.
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value = "")]
        title: String,
        /// Write here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Key/value report printed in either format.
struct Report {
    format: Format,
    lines: Vec<(String, String)>,
}

impl Report {
    fn new(format: Format) -> Self {
        Report { format, lines: Vec::new() }
    }

    fn put(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn list<T: ToString>(&mut self, key: &str, values: &[T]) {
        let joined: Vec<String> = values.iter().map(ToString::to_string).collect();
        self.put(key, format!("[{}]", joined.join(",")));
    }

    fn barcode(&mut self, key: &str, b: &Barcode) {
        self.put(&format!("{key}_count"), b.len());
        for bar in b.bars() {
            self.put(key, bar);
        }
    }

    fn matching(&mut self, m: &Matching) {
        for (i, j) in &m.pairs {
            self.put("pair", format!("{i}->{j}"));
        }
        self.list("unmatched_left", &m.unmatched_left);
        self.list("unmatched_right", &m.unmatched_right);
    }

    fn write(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let width = self.lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.lines {
            match self.format {
                Format::Machine => writeln!(out, "{k}={v}")?,
                Format::Text => writeln!(out, "{k:<width$}  {v}")?,
            }
        }
        Ok(())
    }
}

/// Parse `args` (including the program name), run the command and return
/// the exit code: 0 on success, 1 for hypothesis failures, 2 for assertion
/// failures, 3 for input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let mut report = Report::new(cli.format);
    match execute(cli.command, &mut report, out) {
        Ok(code) => {
            if let Err(e) = report.write(out) {
                let _ = writeln!(err, "error: {e}");
                return 3;
            }
            code
        }
        Err(e) => {
            let _ = report.write(out);
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn filtration(args: FiltrationArgs) -> Result<SpectralFiltration> {
    let ring = CrossRing::new(args.ring.family, args.ring.n)?;
    SpectralFiltration::new(ring, args.values, args.nonneg)
}

fn execute(command: Command, r: &mut Report, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { file } => {
            let c = read_complex(&file)?.complex;
            let report = c.validate();
            r.put("valid", report.is_valid());
            r.put("summary", report.summary());
            for w in &report.d_squared {
                r.put("d_squared", w);
            }
            for w in &report.filtration {
                r.put("filtration", w);
            }
            for w in &report.grading {
                r.put("grading", w);
            }
            for w in &report.non_strict {
                r.put("non_strict", w);
            }
            if !report.is_valid() {
                return Err(Error::Validation(Box::new(report)));
            }
        }
        Command::Barcode { file, precision } => {
            let c = read_complex(&file)?.complex;
            let p = c.working_precision(precision.as_ref());
            let b = c.barcode(Some(&p))?;
            r.put("precision", &p);
            r.barcode("bar", &b);
            r.put("spectrum", b.length_spectrum());
        }
        Command::Cone { file, map, sigma } => {
            let parsed = read_complex(&file)?;
            let cone = build_cone(&parsed.complex, &parsed.complex, parsed.map(&map)?, &sigma)?;
            let doc = ComplexDocument::from_complex(&cone.cone, &[]);
            writeln!(out, "{}", doc.to_json())?;
        }
        Command::Split {
            file,
            map,
            sigma,
            precision,
        } => {
            let parsed = read_complex(&file)?;
            let c = &parsed.complex;
            let sigma = match sigma {
                Some(s) => s,
                None => suggest_sigma(c)?,
            };
            let cone = build_cone(c, c, parsed.map(&map)?, &sigma)?;
            let s = cone.split_spectrum(precision.as_ref())?;
            r.put("sigma", &s.shift);
            r.put("precision", &s.precision);
            r.list("low", &s.low);
            r.list("high", &s.high);
            r.list("high_minus_sigma", &s.high_minus_shift());
            r.put("infinite", s.infinite);
            r.list("homology_values", &s.homology_values);
        }
        Command::DeformBasic {
            base,
            deformed,
            bound,
            precision,
        } => {
            let (c0, c) = (read_complex(&base)?.complex, read_complex(&deformed)?.complex);
            let rep = check_deformation_basic(&c0, &c, &bound, precision.as_ref())?;
            r.put("bound", &rep.bound);
            r.put("perturbation", &rep.perturbation);
            r.put("spectrum0", &rep.spectrum0);
            r.put("spectrum", &rep.spectrum);
            r.list("matched", &rep.matched);
        }
        Command::DeformCone {
            file,
            case,
            sigma,
            a,
            big_a,
            precision,
            transcript,
        } => {
            let parsed = read_complex(&file)?;
            let base = parsed.complex.clone();
            let base0 = FilteredComplex::new(base.space().clone(), parsed.map("d0")?.clone())?;
            let deformation = ConeDeformation {
                base0,
                base,
                map0: parsed.map("D0")?.clone(),
                map: parsed.map("D")?.clone(),
                sigma,
                a,
                big_a,
            };
            let case = match case {
                CaseArg::Low => DeformationCase::Low,
                CaseArg::High => DeformationCase::High,
            };
            let rep = deformation.check(case, precision.as_ref(), transcript)?;
            r.put("verified", rep.verified);
            r.list("low0", &rep.split0.low);
            r.list("low", &rep.split.low);
            r.list("high0", &rep.split0.high);
            r.list("high", &rep.split.high);
            if let Some(t) = &rep.transcript {
                for (label, m) in &t.stages {
                    r.put("stage", label);
                    for i in 0..m.rows() {
                        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
                        r.put("row", row.join(" "));
                    }
                }
                r.list("pivot_values", &t.values);
            }
        }
        Command::Bottleneck { left, right, mod_shift } => {
            let (b1, b2) = (read_barcode(&left)?, read_barcode(&right)?);
            if mod_shift {
                shifted(r, &b1, &b2);
            } else {
                let (d, m) = bottleneck(&b1, &b2);
                r.put("distance", d);
                r.matching(&m);
            }
        }
        Command::BottleneckShift { left, right } => {
            let (b1, b2) = (read_barcode(&left)?, read_barcode(&right)?);
            shifted(r, &b1, &b2);
        }
        Command::LsvCount { file } => {
            let p = read_periodic(&file)?;
            let rep = lsv_endpoint_count(&p)?;
            r.put("period_action", p.period_action());
            r.put("x_total", rep.x_total);
            r.put("x_window", rep.x_window);
            r.put("lower", rep.lower);
            r.put("upper", rep.upper);
            r.put("crossing_minus", rep.crossing_minus);
            r.put("crossing_plus", rep.crossing_plus);
            r.put("long_bars", rep.long_bars);
        }
        Command::MultSpectrum { filtration: f, power } => {
            let f = filtration(f)?;
            r.list("spectrum", &mult_spectrum(&f, power)?);
            if f.nonneg_mode || f.multiplication_map(f.ring.point_power())?.is_filtered() {
                r.put("gamma", gamma_from_filtration(&f)?);
            }
        }
        Command::RootBounds { filtration: f, m, k } => {
            let f = filtration(f)?;
            let rep = check_root_of_unity_bounds(&f, m, k)?;
            r.put("power", rep.power);
            r.list("spectrum", &rep.spectrum);
            r.put("telescoped", &rep.telescoped);
            r.put("beta_top", &rep.beta_top);
            r.put("bound_top", &rep.bound_top);
            r.put("beta_ceiling", &rep.beta_ceiling);
            r.put("bound_ceiling", &rep.bound_ceiling);
        }
        Command::CrossBounds { ring } => {
            let ring = CrossRing::new(ring.family, ring.n)?;
            let k = ring_constants(&ring);
            r.put("family", ring.family);
            r.put("n", ring.n);
            r.put("maslov", ring.maslov);
            r.put("c", &k.c);
            r.put("beta_bound", &k.beta_bound);
            r.put("gamma_bound", &k.gamma_bound);
            r.put("C", &k.ambient);
            r.put("s_star", &k.s_star);
        }
        Command::ProductBound { family, n, beta } => {
            if family.len() != n.len() {
                return Err(Error::format(
                    "--n",
                    format!("{} families but {} values of n", family.len(), n.len()),
                ));
            }
            let rings = family
                .into_iter()
                .zip(n)
                .map(|(f, n)| CrossRing::new(f, n))
                .collect::<Result<Vec<_>>>()?;
            r.put("bound", product_bound(&rings, &beta)?);
        }
        Command::RandomSuite { prop, seeds, seed } => {
            let s = run_suite(prop, seed..seed + seeds);
            r.put("property", s.property);
            r.put("seeds", format!("{}..{}", s.seeds.start, s.seeds.end));
            r.put("passed", s.passed);
            r.put("checks", s.checks);
            r.put("vacuous", s.vacuous);
            r.put("hypothesis_failures", s.hypothesis_failures);
            r.put("assertion_failures", s.assertion_failures);
            r.put("input_failures", s.input_failures);
            for (seed, msg) in &s.failures {
                r.put("failure", format!("seed {seed}: {msg}"));
            }
            if s.assertion_failures > 0 {
                return Ok(2);
            }
            if s.hypothesis_failures > 0 || s.input_failures > 0 {
                return Ok(1);
            }
        }
        Command::Plot {
            file,
            complex,
            title,
            output,
        } => {
            let b = if complex {
                read_complex(&file)?.complex.barcode(None)?
            } else {
                read_barcode(&file)?
            };
            let svg = barcode_svg(&b, &title);
            match output {
                Some(path) => std::fs::write(&path, svg)?,
                None => out.write_all(svg.as_bytes())?,
            }
        }
    }
    Ok(0)
}

fn shifted(r: &mut Report, b1: &Barcode, b2: &Barcode) {
    let s = bottleneck_mod_shift(b1, b2);
    r.put("distance", &s.distance);
    r.put("shift", &s.shift);
    r.matching(&s.matching);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("novikov").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn circle_constants() {
        let (code, out, _) = run_str(&["cross-bounds", "--family", "sn", "--n", "1", "--format", "machine"]);
        assert_eq!(code, 0);
        for line in ["c=1/2", "beta_bound=1/2", "gamma_bound=3/4", "C=3/2", "s_star=1/3"] {
            assert!(out.lines().any(|l| l == line), "{line} missing from {out}");
        }
    }

    #[test]
    fn bad_arguments_are_input_errors() {
        assert_eq!(run_str(&["cross-bounds", "--family", "torus", "--n", "1"]).0, 3);
        assert_eq!(run_str(&["--help"]).0, 0);
    }
}
