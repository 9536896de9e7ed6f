//! `declip` command-line front end.
//!
//! Scalar results go to stdout (or `--out`) as one-line JSON records
//! `{op, inputs, value|interval|estimate, method, certificate}`; series
//! are CSV. Exit codes: 0 success, 2 usage, 3 numeric or method failure,
//! 4 I/O.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::experiments::{self, ExperimentConfig};
use crate::frames::{self, Frame};
use crate::numerics::Rng;
use crate::packing::{self, LambdaC};
use crate::recovery::{self, MeasuredPattern, StepSchedule};
use crate::saturation;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "declip", version, about = "Recovery from saturated frame coefficients")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Generator seed.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a frame file.
    Gen(GenArgs),
    /// Critical saturation level of a frame.
    LambdaC(LambdaCArgs),
    /// Reconstruct a vector from (clipped) coefficients.
    Recover(RecoverArgs),
    /// Monte-Carlo comparison of the two algorithms.
    Experiment(ExperimentArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Random,
    Onb,
    Etf,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: usize,
    /// Number of vectors; required for `random`, implied otherwise.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Bounds,
    Estimate,
    #[value(name = "oracle-n2")]
    OracleN2,
}

#[derive(Args, Debug)]
pub struct LambdaCArgs {
    #[arg(long)]
    pub frame: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Linear,
    Saturated,
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    #[arg(long)]
    pub frame: PathBuf,
    /// Whitespace-separated coefficients, one per frame vector.
    #[arg(long)]
    pub coeffs: PathBuf,
    /// Clip level; required for `saturated`. With `linear` it restricts
    /// the iteration to the unsaturated vectors.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Defaults to 2/(A+B) of the full frame.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Defaults to alpha.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    /// Ground-truth vector; errors are then ‖x − y_k‖.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 30)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also write per-trial errors to raw.csv.
    #[arg(long)]
    pub raw: bool,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } | Error::Parse { .. } => EXIT_IO,
            _ => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("declip: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(&cli.common, a),
        Command::LambdaC(a) => cmd_lambda_c(&cli.common, a),
        Command::Recover(a) => cmd_recover(&cli.common, a),
        Command::Experiment(a) => cmd_experiment(&cli.common, a),
    }
}

fn emit(common: &Common, body: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::io(path, e).into()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e).into())
        }
    }
}

fn record(op: &str, inputs: Value, result_key: &str, result: Value, method: &str, certificate: Value) -> String {
    let mut rec = serde_json::Map::new();
    rec.insert("op".into(), json!(op));
    rec.insert("inputs".into(), inputs);
    rec.insert(result_key.into(), result);
    rec.insert("method".into(), json!(method));
    rec.insert("certificate".into(), certificate);
    let mut s = serde_json::to_string(&Value::Object(rec)).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn cmd_gen(common: &Common, a: &GenArgs) -> Result<(), Failure> {
    let frame = match a.kind {
        Kind::Random => {
            let m = a
                .m
                .ok_or_else(|| Failure::usage("--m is required for --kind random"))?;
            let mut rng = Rng::seed_from_u64(common.seed);
            frames::random_unit_frame(a.n, m, &mut rng)?
        }
        Kind::Onb => {
            if a.m.is_some_and(|m| m != a.n) {
                return Err(Failure::usage("an orthonormal basis has m = n"));
            }
            frames::orthonormal_basis(a.n)?
        }
        Kind::Etf => {
            if a.m.is_some_and(|m| m != a.n + 1) {
                return Err(Failure::usage("the simplex frame has m = n + 1"));
            }
            frames::simplex_etf(a.n)?
        }
    };
    emit(common, &frame.to_text())
}

pub fn cmd_lambda_c(common: &Common, a: &LambdaCArgs) -> Result<(), Failure> {
    let frame = Frame::read(&a.frame)?;
    let (method, result) = match a.method {
        Method::Exact => ("exact", packing::lambda_c_exact_simplex_case(&frame)?),
        Method::Bounds => ("bounds", packing::lambda_c_bounds(&frame)?),
        Method::Estimate => {
            let mut rng = Rng::seed_from_u64(common.seed);
            ("estimate", packing::lambda_c_estimate(&frame, a.restarts, &mut rng)?)
        }
        Method::OracleN2 => ("oracle-n2", packing::lambda_c_oracle_n2(&frame)?),
    };
    let inputs = json!({
        "frame": a.frame.display().to_string(),
        "n": frame.dim(),
        "m": frame.len(),
        "restarts": a.restarts,
        "seed": common.seed,
    });
    let body = match common.format {
        Format::Json => {
            let (key, value, cert) = match &result {
                LambdaC::Exact {
                    value,
                    full_spark,
                    coherence,
                } => (
                    "value",
                    json!(value),
                    json!({"full_spark": full_spark, "coherence": coherence}),
                ),
                LambdaC::Interval {
                    lower,
                    upper,
                    exhaustive,
                    packing_constant,
                    subset,
                } => (
                    "interval",
                    json!({"lower": lower, "upper": upper}),
                    json!({
                        "exhaustive": exhaustive,
                        "upper_certified": exhaustive,
                        "packing_constant": packing_constant,
                        "subset": subset,
                    }),
                ),
                LambdaC::Estimate {
                    value,
                    restarts,
                    best_restart,
                    witness,
                } => (
                    "estimate",
                    json!(value),
                    json!({
                        "lower_bound": true,
                        "restarts": restarts,
                        "best_restart": best_restart,
                        "witness": witness,
                    }),
                ),
                LambdaC::Oracle { value, grid, angle } => (
                    "value",
                    json!(value),
                    json!({"grid": grid, "angle": angle}),
                ),
            };
            record("lambda_c", inputs, key, value, method, cert)
        }
        Format::Csv => {
            let (lower, upper) = match &result {
                LambdaC::Interval { lower, upper, .. } => (*lower, *upper),
                other => (other.value(), other.value()),
            };
            format!(
                "method,value,lower,upper\n{method},{},{},{}\n",
                crate::fmt_float(result.value()),
                crate::fmt_float(lower),
                crate::fmt_float(upper)
            )
        }
    };
    emit(common, &body)
}

/// Whitespace-separated floats; `#` starts a comment.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("bad number {tok:?}"),
            })?;
            out.push(v);
        }
    }
    Ok(out)
}

pub fn cmd_recover(common: &Common, a: &RecoverArgs) -> Result<(), Failure> {
    let frame = Frame::read(&a.frame)?;
    let coeffs = read_vector(&a.coeffs)?;
    let truth = a.truth.as_deref().map(read_vector).transpose()?;
    if coeffs.len() != frame.len() {
        return Err(Error::BadShape(format!(
            "{} coefficients for {} frame vectors",
            coeffs.len(),
            frame.len()
        ))
        .into());
    }
    let alpha = match a.alpha {
        Some(v) => v,
        None => frame.bounds()?.optimal_step(),
    };
    let beta = a.beta.unwrap_or(alpha);
    let trace = match a.algo {
        Algo::Saturated => {
            let lambda = a
                .lambda
                .ok_or_else(|| Failure::usage("--lambda is required for --algo saturated"))?;
            recovery::saturated_frame_algorithm(
                &frame,
                &coeffs,
                lambda,
                &StepSchedule::constant(alpha, beta),
                a.iters,
                truth.as_deref(),
            )?
        }
        Algo::Linear => match a.lambda {
            Some(lambda) => {
                let p = MeasuredPattern::from_saturated(&coeffs, lambda)?;
                if !frame.spans_with(&p.unsaturated, saturation::SPAN_TOL) {
                    return Err(Error::NotAFrame {
                        lower: 0.0,
                        upper: frame.upper_bound(),
                    }
                    .into());
                }
                let sub = frame.subframe(&p.unsaturated)?;
                let c: Vec<f64> = p.unsaturated.iter().map(|&j| coeffs[j]).collect();
                recovery::linear_frame_algorithm(&sub, &c, alpha, a.iters, truth.as_deref())?
            }
            None => recovery::linear_frame_algorithm(&frame, &coeffs, alpha, a.iters, truth.as_deref())?,
        },
    };
    let body = match common.format {
        Format::Csv => trace.to_csv(),
        Format::Json => {
            let inputs = json!({
                "frame": a.frame.display().to_string(),
                "coeffs": a.coeffs.display().to_string(),
                "lambda": a.lambda,
                "alpha": alpha,
                "beta": if a.algo == Algo::Linear { 0.0 } else { beta },
                "iters": a.iters,
                "truth": a.truth.as_ref().map(|p| p.display().to_string()),
            });
            let value = json!({
                "solution": trace.last(),
                "error": trace.errors.last(),
                "residual": trace.residuals.last(),
                "iterations": trace.iterations(),
            });
            let method = match a.algo {
                Algo::Linear => "linear",
                Algo::Saturated => "saturated",
            };
            record(
                "recover",
                inputs,
                "value",
                value,
                method,
                json!({"has_ground_truth": trace.has_ground_truth}),
            )
        }
    };
    emit(common, &body)
}

pub fn cmd_experiment(common: &Common, a: &ExperimentArgs) -> Result<(), Failure> {
    let cfg = ExperimentConfig {
        n: a.n,
        m: a.m,
        lambda: a.lambda,
        trials: a.trials,
        iters: a.iters,
        master_seed: common.seed,
    };
    let report = experiments::run_experiment_with(&cfg, experiments::threads_from_env(), a.raw)?;
    let files = experiments::emit_report(&report, &a.out_dir)?;
    let last = report.iters() - 1;
    let body = match common.format {
        Format::Json => record(
            "experiment",
            serde_json::to_value(&cfg).expect("config serializes"),
            "value",
            json!({
                "final_mean_red_db": report.mean_red_db[last],
                "final_db_of_means": report.db_of_means[last],
                "final_mean_err_linear": report.mean_err_linear[last],
                "final_mean_err_nonlinear": report.mean_err_nonlinear[last],
            }),
            "monte_carlo",
            json!({
                "redraws": report.redraws,
                "nonlinear_dominates": report.nonlinear_dominates,
                "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            }),
        ),
        Format::Csv => experiments::summary_csv(&report),
    };
    emit(common, &body)
}
