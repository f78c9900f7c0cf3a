//! Command-line front end: every verification is a named, scriptable check
//! emitting JSON-lines reports on stdout. Exit codes: 0 all checks pass,
//! 1 numerical failures, 2 usage errors, 3 data errors.

use clap::{Parser, Subcommand};
use std::io::Write;
use std::process::ExitCode;
use tracekit::checks;
use tracekit::operators::Weight;
use tracekit::plancherel::{density, AppendixIntegral};
use tracekit::report::VerificationReport;
use tracekit::spectrum::SpectrumModel;
use tracekit::C64;

#[derive(Parser)]
#[command(name = "tracekit", version, about = "numerical checks for weight-k trace formulas and zeta functions on SU(2,1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Appendix integrals: quadrature oracle vs closed form
    Appendix {
        /// which integral (A1..A4); all when omitted
        #[arg(long)]
        which: Option<String>,
        /// single r value; the standard grid when omitted
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Transform round trips Phi -> P_k -> Phi
    Roundtrip {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// h_k(r) against the direct Lambda_k integral
    LambdaChain {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Horospherical integral identity (3D quadrature)
    Horospherical {
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Phi(0) consistency for the rational family
    Identity {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Orbital 2D oracle vs closed hyperbolic terms
    Orbital {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Two formulations of the geometric side
    GeomSide {
        /// spectrum JSON file; a built-in 3-pair model when omitted
        #[arg(long)]
        spectrum: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Zeta product truncation stability
    Zeta {
        #[arg(long)]
        spectrum: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// d/ds log Z (product) vs the log-derivative series
    ZetaDuality {
        #[arg(long)]
        spectrum: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Hyperbolic sum vs the four-term Z'/Z combination
    Prop36 {
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// W continuation: series vs defining integral
    WConsistency {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Functional-equation parity gaps
    Fe {
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Trivial-zero contour residues vs multiplicity formulas
    Residue {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Integration-by-parts identity behind the closed functional equations
    Cor39 {
        /// single x value in (0.02, 0.98); the standard grid when omitted
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Radial ODE residuals for the eigenfunctions
    Ode {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Point-pair invariance, membership, Cayley round trips
    GeometryInvariance {
        #[arg(long, default_value_t = 20_260_809)]
        seed: u64,
    },
    /// Validate a spectrum JSON file
    SpectrumValidate { file: String },
    /// Sample a formula to CSV (currently: density)
    Plot {
        #[command(subcommand)]
        what: PlotTarget,
    },
    /// Run the full acceptance battery
    Suite {
        #[arg(long, default_value_t = 20_260_809)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum PlotTarget {
    /// Plancherel density d_k(r)
    Density {
        /// weight as 0, 1/2 or 1
        #[arg(long, default_value = "0")]
        k: String,
        #[arg(long, default_value_t = 5.0)]
        rmax: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long)]
        out: String,
    },
}

/// Parses "a+bi" / "a-bi" / "a" / "bi" complex literals.
#[allow(dead_code)]
fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(re) = s.parse::<f64>() {
        return Ok(C64::new(re, 0.0));
    }
    if let Some(body) = s.strip_suffix('i') {
        // split at the last +/- that is not an exponent sign or leading sign
        let bytes = body.as_bytes();
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                let re: f64 = body[..i].parse().map_err(|e| format!("bad real part: {e}"))?;
                let im_str = &body[i..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|e| format!("bad imaginary part: {e}"))?
                };
                return Ok(C64::new(re, im));
            }
        }
        let im: f64 = if body.is_empty() {
            1.0
        } else {
            body.parse().map_err(|e| format!("bad imaginary part: {e}"))?
        };
        return Ok(C64::new(0.0, im));
    }
    Err(format!("cannot parse complex literal `{text}` (expected a+bi)"))
}

fn parse_weight(text: &str) -> Result<Weight, String> {
    match text {
        "0" => Ok(Weight::ZERO),
        "1/2" | "0.5" => Ok(Weight::HALF),
        "1" => Ok(Weight::ONE),
        other => Err(format!("unsupported weight {other} (use 0, 1/2 or 1)")),
    }
}

fn load_model(path: Option<&str>) -> Result<SpectrumModel, (u8, String)> {
    match path {
        None => Ok(checks::standard_model()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| (3u8, format!("cannot read {p}: {e}")))?;
            SpectrumModel::from_json_str(&text).map_err(|e| (3u8, e.to_string()))
        }
    }
}

fn emit(reports: &[VerificationReport]) -> bool {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let mut all_pass = true;
    for r in reports {
        writeln!(lock, "{}", r.to_json()).ok();
        all_pass &= r.pass;
    }
    all_pass
}

fn thread_cap() -> usize {
    std::env::var("TRACEKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get().min(4)).unwrap_or(1)
        })
}

fn run_suite(seed: u64) -> bool {
    let checks = checks::suite_checks(seed);
    let n = checks.len();
    let results: Vec<(usize, Vec<VerificationReport>)> = {
        let cap = thread_cap().max(1);
        let mut results = Vec::with_capacity(n);
        let mut queue: Vec<(usize, _)> = checks.into_iter().enumerate().collect();
        // run in waves of at most `cap` threads; each check is independent
        while !queue.is_empty() {
            let wave: Vec<_> = queue.drain(..queue.len().min(cap)).collect();
            let handles: Vec<_> = wave
                .into_iter()
                .map(|(idx, (_, runner))| std::thread::spawn(move || (idx, runner())))
                .collect();
            for h in handles {
                results.push(h.join().expect("check thread panicked"));
            }
        }
        results.sort_by_key(|(idx, _)| *idx);
        results
    };
    // report lines serialized in declaration order
    let mut all_pass = true;
    for (_, reports) in &results {
        all_pass &= emit(reports);
    }
    all_pass
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, (u8, String)> = match cli.command {
        Command::Appendix { which, r, tol } => {
            let sel = match which {
                Some(w) => match AppendixIntegral::parse(&w) {
                    Ok(a) => Some(a),
                    Err(e) => return usage_error(&e.to_string()),
                },
                None => None,
            };
            let rs: Vec<f64> = match r {
                Some(v) => vec![v],
                None => vec![0.1, 0.5, 1.0, 2.0, 5.0],
            };
            Ok(emit(&checks::appendix_reports(sel, &rs, tol)))
        }
        Command::Roundtrip { tol } => Ok(emit(&checks::roundtrip_reports(tol))),
        Command::LambdaChain { tol } => Ok(emit(&checks::lambda_chain_reports(tol))),
        Command::Horospherical { tol } => Ok(emit(&checks::horospherical_reports(tol))),
        Command::Identity { tol } => Ok(emit(&checks::identity_reports(tol))),
        Command::Orbital { tol } => Ok(emit(&checks::orbital_reports(tol))),
        Command::GeomSide { spectrum, tol } => load_model(spectrum.as_deref())
            .map(|m| emit(&checks::geom_side_reports(&m, tol))),
        Command::Zeta { spectrum, tol } => load_model(spectrum.as_deref())
            .map(|m| emit(&checks::zeta_stability_reports(&m, tol))),
        Command::ZetaDuality { spectrum, tol } => load_model(spectrum.as_deref())
            .map(|m| emit(&checks::zeta_duality_reports(&m, tol))),
        Command::Prop36 { tol } => Ok(emit(&checks::prop36_reports(tol))),
        Command::WConsistency { tol } => Ok(emit(&checks::w_consistency_reports(tol))),
        Command::Fe { tol } => Ok(emit(&checks::fe_reports(tol))),
        Command::Residue { tol } => Ok(emit(&checks::residue_reports(tol))),
        Command::Cor39 { x, tol } => {
            if let Some(x) = x {
                let t = std::time::Instant::now();
                let rep = match tracekit::zeta::cor39_identity(x) {
                    Ok(c) => VerificationReport::compare(
                        "cor39",
                        tracekit::report::inputs([("x", format!("{x}"))]),
                        C64::new(c.lhs, 0.0),
                        C64::new(c.rhs, 0.0),
                        tol,
                        tracekit::report::TolMode::Abs,
                        t,
                    ),
                    Err(e) => return data_error(&e.to_string()),
                };
                Ok(emit(&[rep]))
            } else {
                Ok(emit(&checks::cor39_reports(tol)))
            }
        }
        Command::Ode { tol } => Ok(emit(&checks::ode_reports(tol))),
        Command::GeometryInvariance { seed } => {
            Ok(emit(&checks::geometry_invariance_reports(seed)))
        }
        Command::SpectrumValidate { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return data_error(&format!("cannot read {file}: {e}")),
            };
            match SpectrumModel::from_json_str(&text) {
                Ok(model) => {
                    for w in &model.warnings {
                        eprintln!("warning: {w}");
                    }
                    let t = std::time::Instant::now();
                    let rep = VerificationReport::expectation(
                        "spectrum-validate",
                        tracekit::report::inputs([
                            ("file", file.clone()),
                            ("c2", format!("{}", model.c2)),
                            ("pairs", format!("{}", model.pairs.len())),
                            ("warnings", format!("{}", model.warnings.len())),
                        ]),
                        true,
                        t,
                    );
                    Ok(emit(&[rep]))
                }
                Err(e) => return data_error(&e.to_string()),
            }
        }
        Command::Plot { what } => match what {
            PlotTarget::Density { k, rmax, step, out } => {
                let weight = match parse_weight(&k) {
                    Ok(w) => w,
                    Err(e) => return usage_error(&e),
                };
                if step <= 0.0 || rmax <= 0.0 {
                    return usage_error("rmax and step must be positive");
                }
                let mut csv = String::from("r,density\n");
                let mut r = 0.0;
                while r <= rmax + 1e-12 {
                    csv.push_str(&format!("{r},{}\n", density(weight, r).unwrap()));
                    r += step;
                }
                if let Err(e) = std::fs::write(&out, csv) {
                    return data_error(&format!("cannot write {out}: {e}"));
                }
                println!("wrote {out}");
                Ok(true)
            }
        },
        Command::Suite { seed } => Ok(run_suite(seed)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn data_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(3)
}
