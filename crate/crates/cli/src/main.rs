//! `perdist` command line: corpus emission, products, compatibility checks,
//! cone counting, wave front scans, shift-invariant products and the
//! acceptance suite.
//!
//! Exit codes: 0 on success, 1 when a verdict is false and `--strict` is set
//! (or an acceptance criterion fails), 2 on usage errors and unreadable input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use perdist::acceptance::{run_criterion, CRITERIA};
use perdist::compat::check_compatibility;
use perdist::cones::{count_growth_fit, intersection_count, uniform_directions, LatticeCone};
use perdist::distributions::{from_closed_form, ClosedFormSpec, CoefficientField};
use perdist::product::{cauchy_product, ProductMethod};
use perdist::shiftinv::{si_product, SampledGenerator, ShiftInvariantElement};
use perdist::trace::PartialSumTrace;
use perdist::wavefront::{wavefront_scan, Signal};
use perdist::window::LocalizationWindow;

#[derive(Parser)]
#[command(name = "perdist", version, about = "Periodic distributions from truncated Fourier coefficients")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Kind {
    DiracComb,
    Constant,
    Harmonic,
    Sawtooth,
    SquareWave,
    SquareWaveX,
    SquareWaveY,
    ConeSupported,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Fft,
}

#[derive(Subcommand)]
enum Command {
    /// Write the exact coefficient field of a closed-form distribution.
    Corpus {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        radius: usize,
        /// Harmonic index, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        index: Vec<i64>,
        /// Cone file for `cone_supported`.
        #[arg(long)]
        cone: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        inside_exp: f64,
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        outside_exp: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Cauchy product of two coefficient files.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compatible coefficient estimates for two fields on their cones.
    CompatCheck {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        cones1: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        cones2: Vec<PathBuf>,
        /// Directory for `report.json` and the trace CSVs.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Exit with status 1 when the verdict is false.
        #[arg(long)]
        strict: bool,
    },
    /// Lattice points of `c2 ∩ (n - c1)` along sampled directions.
    ConeCount {
        c1: PathBuf,
        c2: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
        radii: Vec<usize>,
        #[arg(long, default_value_t = 16)]
        directions: usize,
        /// Count a single lattice point instead, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        n: Vec<i64>,
        /// CSV destination; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cone-restricted regularity scan at a point.
    Wavefront {
        /// Global coefficient file.
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        x0: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, default_value_t = 16)]
        directions: usize,
        #[arg(long, default_value_t = 20.0)]
        aperture_deg: f64,
        #[arg(long, default_value_t = 64)]
        radius: usize,
        #[arg(long, default_value_t = 0.9)]
        eta: f64,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Exit with status 1 when some direction is not regular.
        #[arg(long)]
        strict: bool,
    },
    /// Product of two shift-invariant elements.
    SiProduct {
        #[arg(long, num_args = 1.., required = true)]
        gen1: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        coeffs1: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s1: f64,
        #[arg(long, num_args = 1.., required = true)]
        gen2: Vec<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        coeffs2: Vec<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s2: f64,
        /// One cone per generator of the first element; enables the compatibility check.
        #[arg(long, num_args = 1..)]
        cones1: Vec<PathBuf>,
        #[arg(long, num_args = 1..)]
        cones2: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run the acceptance criteria and print one line per criterion.
    Acceptance {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

/// Failure kinds mapped to exit codes.
enum Outcome {
    Ok,
    VerdictFalse,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerdictFalse) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_field(path: &Path) -> Result<CoefficientField> {
    Ok(CoefficientField::read_json(path)?)
}

fn read_cones(paths: &[PathBuf]) -> Result<Vec<LatticeCone>> {
    paths.iter().map(|p| Ok(LatticeCone::read_json(p)?)).collect()
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn trace_csv(t: &PartialSumTrace) -> String {
    let mut out = String::from("radius,sum,slope\n");
    for ((r, s), slope) in t.radii.iter().zip(&t.sums).zip(t.local_slopes()) {
        let slope = slope.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let _ = writeln!(out, "{r},{s:.16e},{slope}");
    }
    out
}

fn spec_for(
    kind: Kind,
    dim: Option<usize>,
    index: Vec<i64>,
    cone: Option<PathBuf>,
    inside: f64,
    outside: f64,
) -> Result<ClosedFormSpec> {
    let fixed = |d: usize, spec: ClosedFormSpec| -> Result<ClosedFormSpec> {
        match dim {
            Some(x) if x != d => bail!("this kind has dimension {d}, got --dim {x}"),
            _ => Ok(spec),
        }
    };
    let need_dim = || dim.context("--dim is required for this kind");
    match kind {
        Kind::DiracComb => Ok(ClosedFormSpec::DiracComb { dim: need_dim()? }),
        Kind::Constant => Ok(ClosedFormSpec::Constant { dim: need_dim()? }),
        Kind::Harmonic => {
            if index.is_empty() {
                bail!("--index is required for harmonic");
            }
            let d = index.len();
            fixed(d, ClosedFormSpec::Harmonic { index })
        }
        Kind::Sawtooth => fixed(1, ClosedFormSpec::Sawtooth),
        Kind::SquareWave => fixed(1, ClosedFormSpec::SquareWave),
        Kind::SquareWaveX => fixed(2, ClosedFormSpec::square_wave_in_x()),
        Kind::SquareWaveY => fixed(2, ClosedFormSpec::square_wave_in_y()),
        Kind::ConeSupported => {
            let cone = LatticeCone::read_json(cone.context("--cone is required for cone_supported")?)?;
            fixed(cone.dim(), ClosedFormSpec::ConeSupported { cone, inside_exp: inside, outside_exp: outside })
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Corpus { kind, dim, radius, index, cone, inside_exp, outside_exp, output } => {
            let spec = spec_for(kind, dim, index, cone, inside_exp, outside_exp)?;
            from_closed_form(&spec, radius)?.write_json(&output)?;
            Ok(Outcome::Ok)
        }
        Command::Product { left, right, method, output } => {
            let (a, b) = (read_field(&left)?, read_field(&right)?);
            let method = match method {
                Method::Direct => ProductMethod::Direct,
                Method::Fft => ProductMethod::Fft,
            };
            cauchy_product(&a, &b, method)?.write_json(&output)?;
            Ok(Outcome::Ok)
        }
        Command::CompatCheck { left, right, cones1, cones2, out_dir, strict } => {
            let (f1, f2) = (read_field(&left)?, read_field(&right)?);
            let (c1, c2) = (read_cones(&cones1)?, read_cones(&cones2)?);
            let report = check_compatibility(&f1, &c1, &f2, &c2)?;
            println!("verdict: {}", report.verdict);
            println!(
                "alpha1 {} beta1 {} alpha2 {} beta2 {} gamma_hat {:.4} gamma {}",
                report.alpha1, report.beta1, report.alpha2, report.beta2, report.gamma_hat, report.gamma
            );
            match report.tau {
                Some(t) => println!("tau: {t}"),
                None => println!("tau: none"),
            }
            for f in &report.failures {
                println!("failure: {f}");
            }
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                write(&dir.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
                for (side, profiles) in [(1, &report.profiles1), (2, &report.profiles2)] {
                    for (i, p) in profiles.iter().enumerate() {
                        write(&dir.join(format!("f{side}_cone{i}_inside.csv")), &trace_csv(&p.inside_trace))?;
                        write(&dir.join(format!("f{side}_cone{i}_outside.csv")), &trace_csv(&p.outside_trace))?;
                    }
                }
            }
            Ok(if strict && !report.verdict { Outcome::VerdictFalse } else { Outcome::Ok })
        }
        Command::ConeCount { c1, c2, radii, directions, n, output } => {
            let (a, b) = (LatticeCone::read_json(&c1)?, LatticeCone::read_json(&c2)?);
            let mut csv = String::from("n,norm,count\n");
            let fmt_n = |k: &[i64]| k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            if !n.is_empty() {
                let count = intersection_count(&a, &b, &n)?;
                let norm = n.iter().map(|x| (x * x) as f64).sum::<f64>().sqrt();
                let _ = writeln!(csv, "{},{norm:.16e},{count}", fmt_n(&n));
            } else {
                let fit = count_growth_fit(&a, &b, &uniform_directions(a.dim(), directions)?, &radii)?;
                for s in &fit.samples {
                    let _ = writeln!(csv, "{},{:.16e},{}", fmt_n(s.n.coords()), s.norm, s.count);
                }
                eprintln!("gamma_hat {:.6} c_hat {:.6}", fit.gamma_hat, fit.c_hat);
            }
            match output {
                Some(p) => write(&p, &csv)?,
                None => print!("{csv}"),
            }
            Ok(Outcome::Ok)
        }
        Command::Wavefront { input, x0, s, directions, aperture_deg, radius, eta, eps, order, out_dir, strict } => {
            let a = read_field(&input)?;
            let window = LocalizationWindow::new(x0.clone(), eta, eps, order)?;
            let report = wavefront_scan(&Signal::Coefficients(a), &x0, s, directions, aperture_deg, &window, radius)?;
            let mut table = String::from("index,angle_deg,direction,verdict,threshold\n");
            for (i, d) in report.directions.iter().enumerate() {
                let dir = d.direction.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(" ");
                let _ = writeln!(table, "{i},{:.16e},{dir},{},{:.16e}", d.angle_deg(), d.verdict, d.threshold.estimate);
            }
            print!("{table}");
            for c in &report.non_regular_cover {
                println!("non-regular cone: axis {:?} half-angle {:.2} deg", c.axis, c.half_angle_deg);
            }
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                write(&dir.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
                write(&dir.join("directions.csv"), &table)?;
                for (i, d) in report.directions.iter().enumerate() {
                    write(&dir.join(format!("trace_{i}.csv")), &trace_csv(&d.trace))?;
                }
            }
            Ok(if strict && report.non_regular().next().is_some() { Outcome::VerdictFalse } else { Outcome::Ok })
        }
        Command::SiProduct { gen1, coeffs1, s1, gen2, coeffs2, s2, cones1, cones2, out_dir } => {
            let element = |gens: &[PathBuf], coeffs: &[PathBuf], s: f64| -> Result<ShiftInvariantElement> {
                if gens.len() != coeffs.len() {
                    bail!("{} generator files but {} coefficient files", gens.len(), coeffs.len());
                }
                let g = gens.iter().map(|p| Ok(SampledGenerator::read_csv(p, s)?)).collect::<Result<Vec<_>>>()?;
                let c = coeffs.iter().map(|p| read_field(p)).collect::<Result<Vec<_>>>()?;
                Ok(ShiftInvariantElement::new(g, c, s)?)
            };
            let g1 = element(&gen1, &coeffs1, s1)?;
            let g2 = element(&gen2, &coeffs2, s2)?;
            let (k1, k2) = (read_cones(&cones1)?, read_cones(&cones2)?);
            let cones = match (k1.is_empty(), k2.is_empty()) {
                (true, true) => None,
                (false, false) => Some((k1.as_slice(), k2.as_slice())),
                _ => bail!("give cones for both elements or for neither"),
            };
            let product = si_product(&g1, &g2, cones)?;
            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let mut gens = Vec::new();
            let mut coeffs = Vec::new();
            for (i, (g, c)) in product.element.generators.iter().zip(&product.element.coefficients).enumerate() {
                let gname = format!("generator_{i}.csv");
                let cname = format!("coeffs_{i}.json");
                g.write_csv(out_dir.join(&gname))?;
                c.write_json(out_dir.join(&cname))?;
                gens.push(gname);
                coeffs.push(cname);
            }
            let summary = serde_json::json!({
                "s": product.element.s,
                "generators": gens,
                "coefficients": coeffs,
                "compatibility": product.compatibility,
            });
            write(&out_dir.join("element.json"), &serde_json::to_string_pretty(&summary)?)?;
            println!("s: {}", product.element.s);
            println!("generators: {}", product.element.generators.len());
            Ok(Outcome::Ok)
        }
        Command::Acceptance { only } => {
            let ids: Vec<u8> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only };
            let mut all = true;
            for id in ids {
                let o = run_criterion(id, cli.seed)?;
                println!("{o}");
                all &= o.passed;
            }
            println!("{}", if all { "all criteria passed" } else { "some criteria failed" });
            Ok(if all { Outcome::Ok } else { Outcome::VerdictFalse })
        }
    }
}
