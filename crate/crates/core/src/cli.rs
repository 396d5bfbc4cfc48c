//! Command-line front end.
//!
//! Exit codes: `0` all checks pass, `1` mathematical failure, `2` input error.
//! [`run`] does all the work and returns the text to print, so the binary is a
//! thin wrapper and the commands can be tested in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::classify::normal_form;
use crate::connection::{frame_einstein_check, ricci, EinsteinFit};
use crate::error::Error;
use crate::format::StructureFile;
use crate::kenmotsu::{derived_identities, verify_kenmotsu, AlmostContactData, VerificationReport};
use crate::liealg::{jacobi_residual, pushforward, MetricLieAlgebra};
use crate::model::{model_algebra, Lambda};
use crate::numkit::{RealMatrix, DEFAULT_TOL};
use crate::rng::{random_invertible, random_lambda, SplitMix64};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable consulted when `--tol` is absent.
pub const TOL_ENV: &str = "KENMOTSU_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "kenmotsu",
    version,
    about = "Verify, analyse and classify left-invariant Kenmotsu structures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the almost contact, Kenmotsu, derived and Jacobi identities.
    Verify(CheckArgs),
    /// Reduce a Kenmotsu Lie algebra to its model and print λ.
    Classify(CheckArgs),
    /// Print the Ricci tensor and the Einstein fit.
    Curvature(CheckArgs),
    /// Write the model structure for a comma-separated λ.
    Model {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a seeded random model, optionally in a random basis.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        conjugate: bool,
        #[arg(long, default_value_t = 1e4)]
        cond_max: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Residual tolerance (default: $KENMOTSU_TOL, else 1e-9).
    #[arg(long, env = TOL_ENV)]
    pub tol: Option<f64>,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(EXIT_PASS, text)
            }
        }
    }
}

pub fn execute(command: Command) -> Outcome {
    match command {
        Command::Verify(a) => with_input(&a, cmd_verify),
        Command::Classify(a) => with_input(&a, cmd_classify),
        Command::Curvature(a) => with_input(&a, cmd_curvature),
        Command::Model { lambda, out } => cmd_model(&lambda, &out),
        Command::Random {
            n,
            seed,
            conjugate,
            cond_max,
            out,
        } => cmd_random(n, seed, conjugate, cond_max, &out),
    }
}

type Structure = (MetricLieAlgebra, AlmostContactData);

fn with_input(a: &CheckArgs, f: fn(&Structure, f64, bool) -> Outcome) -> Outcome {
    let tol = a.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Outcome::input_error(format!(
            "tolerance must be a positive finite number, got {tol}"
        ));
    }
    match load(&a.input) {
        Ok(s) => f(&s, tol, a.json),
        Err(msg) => Outcome::input_error(msg),
    }
}

/// Reads a structure file; any failure is an input error.
pub fn load(path: &Path) -> Result<Structure, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file = StructureFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if file.dim % 2 == 0 {
        return Err(format!(
            "{}: {}",
            path.display(),
            Error::EvenDimension(file.dim)
        ));
    }
    file.to_structure()
        .map_err(|e| format!("{}: {e}", path.display()))
}

/// Errors that describe malformed input rather than a failed check.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::DimensionMismatch { .. }
            | Error::EvenDimension(_)
            | Error::DegenerateMetric
            | Error::TooLarge { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidStructure(_)
    )
}

fn failure(e: &Error, json: bool) -> Outcome {
    let code = if is_input_error(e) {
        EXIT_INPUT
    } else {
        EXIT_FAIL
    };
    if json {
        let v = json!({ "pass": false, "error": { "kind": e.kind(), "message": e.to_string() } });
        Outcome {
            code,
            stdout: format!("{}\n", serde_json::to_string_pretty(&v).expect("json")),
            stderr: String::new(),
        }
    } else {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {}: {e}\n", e.kind()),
        }
    }
}

/// All checks run by `verify`.
pub fn full_report(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    tol: f64,
) -> crate::Result<VerificationReport> {
    let mut report = match verify_kenmotsu(alg, data, tol) {
        Ok(r) => r,
        Err(Error::AlmostContactViolation(r)) => *r,
        Err(e) => return Err(e),
    };
    report.extend(derived_identities(alg, data, tol)?);
    report.add("jacobi", jacobi_residual(alg), tol);
    Ok(report)
}

fn cmd_verify((alg, data): &Structure, tol: f64, json: bool) -> Outcome {
    let report = match full_report(alg, data, tol) {
        Ok(r) => r,
        Err(e) => return failure(&e, json),
    };
    let code = if report.pass() { EXIT_PASS } else { EXIT_FAIL };
    let stdout = if json {
        let v = json!({ "pass": report.pass(), "checks": report.checks });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
    } else {
        let mut out = String::new();
        for check in &report.checks {
            let _ = writeln!(out, "{check}");
        }
        let _ = writeln!(
            out,
            "result: {}",
            if report.pass() { "PASS" } else { "FAIL" }
        );
        out
    };
    Outcome::ok(code, stdout)
}

/// Shortest text that parses back to the same values.
pub fn format_values(values: &[f64]) -> String {
    if values.is_empty() {
        return "(none)".into();
    }
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_matrix(out: &mut String, m: &RealMatrix) {
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| format!("{x:>24.16e}")).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
}

fn cmd_classify((alg, data): &Structure, tol: f64, json: bool) -> Outcome {
    let nf = match normal_form(alg, data, tol) {
        Ok(nf) => nf,
        Err(e) => return failure(&e, json),
    };
    let stdout = if json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({ "pass": true, "normal_form": nf }))
                .expect("json")
        )
    } else {
        let mut s = format!("lambda: {}\nbasis_change:\n", format_values(&nf.lambdas));
        write_matrix(&mut s, &nf.basis_change);
        let _ = writeln!(s, "residual: {:e}", nf.residual);
        s
    };
    Outcome::ok(EXIT_PASS, stdout)
}

/// Ricci tensor in the input basis, Einstein fit in an orthonormal frame and,
/// for Kenmotsu inputs, the check `c = −(dim − 1)`.
#[derive(Debug, Clone)]
pub struct CurvatureSummary {
    pub ricci: RealMatrix,
    pub fit: EinsteinFit,
    pub kenmotsu: bool,
    /// `|c + dim − 1|` when the input is Kenmotsu.
    pub constant_error: Option<f64>,
    pub pass: bool,
}

pub fn curvature_summary(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    tol: f64,
) -> crate::Result<CurvatureSummary> {
    let ric = ricci(alg)?;
    let fit = frame_einstein_check(alg, tol)?;
    let kenmotsu = matches!(verify_kenmotsu(alg, data, tol), Ok(r) if r.pass());
    let expected = -((alg.dim() - 1) as f64);
    let constant_error = kenmotsu.then(|| (fit.constant - expected).abs());
    let pass = !kenmotsu
        || (fit.pass && constant_error.is_some_and(|e| e < tol * expected.abs().max(1.0)));
    Ok(CurvatureSummary {
        ricci: ric,
        fit,
        kenmotsu,
        constant_error,
        pass,
    })
}

fn cmd_curvature((alg, data): &Structure, tol: f64, json: bool) -> Outcome {
    let s = match curvature_summary(alg, data, tol) {
        Ok(s) => s,
        Err(e) => return failure(&e, json),
    };
    let code = if s.pass { EXIT_PASS } else { EXIT_FAIL };
    let stdout = if json {
        let v = json!({
            "pass": s.pass,
            "ricci": s.ricci.to_rows(),
            "einstein_constant": s.fit.constant,
            "residual": s.fit.residual,
            "einstein": s.fit.pass,
            "kenmotsu": s.kenmotsu,
        });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
    } else {
        let mut out = String::from("ricci:\n");
        write_matrix(&mut out, &s.ricci);
        let _ = writeln!(out, "einstein_constant: {}", s.fit.constant);
        let _ = writeln!(out, "residual: {:e}", s.fit.residual);
        let _ = writeln!(out, "einstein: {}", if s.fit.pass { "yes" } else { "no" });
        if let Some(err) = s.constant_error {
            let _ = writeln!(
                out,
                "kenmotsu: expected constant {}, deviation {err:e}",
                -((alg.dim() - 1) as i64)
            );
        }
        let _ = writeln!(out, "result: {}", if s.pass { "PASS" } else { "FAIL" });
        out
    };
    Outcome::ok(code, stdout)
}

/// Parses `"a,b,..."`; the empty string is the empty list.
pub fn parse_lambda(text: &str) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            let s = s.trim();
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("cannot parse {s:?} as a finite real number")),
            }
        })
        .collect()
}

fn write_structure(path: &Path, s: &Structure) -> Result<(), String> {
    let text = StructureFile::from_structure(&s.0, &s.1).to_json();
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn cmd_model(lambda: &str, out: &Path) -> Outcome {
    let lambda = match parse_lambda(lambda).and_then(|v| Lambda::new(v).map_err(|e| e.to_string()))
    {
        Ok(l) => l,
        Err(msg) => return Outcome::input_error(msg),
    };
    match write_structure(out, &model_algebra(&lambda)) {
        Ok(()) => Outcome::ok(
            EXIT_PASS,
            format!("wrote {} (dim {})\n", out.display(), lambda.dim()),
        ),
        Err(msg) => Outcome::input_error(msg),
    }
}

/// The structure `random --n n --seed seed [--conjugate]` writes, together
/// with its spectrum sorted descending.
pub fn sample_structure(
    n: usize,
    seed: u64,
    conjugate: bool,
    cond_max: f64,
) -> crate::Result<(Structure, Vec<f64>)> {
    let mut rng = SplitMix64::new(seed);
    let lambda = Lambda::new(random_lambda(&mut rng, n))?;
    let (alg, data) = model_algebra(&lambda);
    let structure = if conjugate {
        let t = random_invertible(&mut rng, lambda.dim(), cond_max)?;
        pushforward(&alg, &data, &t)?
    } else {
        (alg, data)
    };
    let mut sorted = lambda.values().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok((structure, sorted))
}

fn cmd_random(n: usize, seed: u64, conjugate: bool, cond_max: f64, out: &Path) -> Outcome {
    let (structure, sorted) = match sample_structure(n, seed, conjugate, cond_max) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    match write_structure(out, &structure) {
        Ok(()) => Outcome::ok(EXIT_PASS, format!("lambda: {}\n", format_values(&sorted))),
        Err(msg) => Outcome::input_error(msg),
    }
}
