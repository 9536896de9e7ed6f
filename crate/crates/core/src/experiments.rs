//! Seeded Monte-Carlo comparison of the linear and saturated frame
//! algorithms on random unit-norm frames.
//!
//! Every trial derives its own generator from `(master_seed, trial)`, so a
//! report is a pure function of its [`ExperimentConfig`] and does not
//! depend on how many worker threads ran the trials.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt_float;
use crate::frames::random_unit_frame;
use crate::numerics::{self, child_seed, Rng};
use crate::recovery::{self, MeasuredPattern, StepSchedule};
use crate::saturation;

/// Redraws allowed per trial before giving up.
pub const REDRAW_BUDGET: u64 = 100;

/// Cap on `|dB|` when one of the errors underflows.
pub const DB_CAP: f64 = 300.0;

/// Errors below this count as exact recovery.
const ZERO_ERROR: f64 = 1e-300;

pub const SUMMARY_HEADER: &str = "iter,mean_err_linear,mean_err_nonlinear,mean_red_db,q1_red_db,q3_red_db";
pub const RAW_HEADER: &str = "trial,iter,err_linear,err_nonlinear";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub trials: usize,
    pub iters: usize,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 10,
            m: 30,
            lambda: 0.4,
            trials: 1000,
            iters: 50,
            master_seed: 42,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m < self.n {
            return Err(Error::BadShape(format!(
                "need m >= n >= 1, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if self.trials == 0 || self.iters == 0 {
            return Err(Error::InvalidArgument(
                "trials and iters must be at least 1".into(),
            ));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::BadLambda(self.lambda));
        }
        Ok(())
    }
}

/// Errors `‖x − y_k‖` for `k = 1..=iters` of both methods on one trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialResult {
    pub linear: Vec<f64>,
    pub nonlinear: Vec<f64>,
    /// Draws discarded because the unsaturated vectors did not span.
    pub redraws: u64,
}

/// `10·log₁₀((e_lin / e_nl)²)`, capped at `±DB_CAP` when an error underflows.
pub fn reduction_db(e_linear: f64, e_nonlinear: f64) -> f64 {
    match (e_linear < ZERO_ERROR, e_nonlinear < ZERO_ERROR) {
        (true, true) => 0.0,
        (false, true) => DB_CAP,
        (true, false) => -DB_CAP,
        (false, false) => (20.0 * (e_linear / e_nonlinear).log10()).clamp(-DB_CAP, DB_CAP),
    }
}

/// One trial: random frame, random unit `x`, both algorithms on `Φ_λΘx`.
///
/// The linear method runs on the unsaturated sub-collection with the
/// unclipped coefficients, `α = 2/(A+B)` from the full frame's bounds; the
/// saturated method uses `α = β = 2/(A+B)`.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialResult> {
    cfg.validate()?;
    for salt in 0..=REDRAW_BUDGET {
        let mut rng = Rng::seed_from_u64(child_seed(cfg.master_seed, trial as u64, salt));
        let frame = random_unit_frame(cfg.n, cfg.m, &mut rng)?;
        let x = numerics::normal_unit_vector(cfg.n, &mut rng);
        let sat = saturation::saturate(&frame.analysis(&x)?, cfg.lambda)?;
        let measured = MeasuredPattern::from_saturated(&sat, cfg.lambda)?;
        if !frame.spans_with(&measured.unsaturated, saturation::SPAN_TOL) {
            log::debug!("trial {trial}: unsaturated vectors do not span (salt {salt}), redrawing");
            continue;
        }
        let step = frame.bounds()?.optimal_step();

        let sub = frame.subframe(&measured.unsaturated)?;
        let sub_coeffs: Vec<f64> = measured.unsaturated.iter().map(|&j| sat[j]).collect();
        let lin = recovery::linear_frame_algorithm(&sub, &sub_coeffs, step, cfg.iters, Some(&x))?;
        let nl = recovery::saturated_frame_algorithm(
            &frame,
            &sat,
            cfg.lambda,
            &StepSchedule::constant(step, step),
            cfg.iters,
            Some(&x),
        )?;
        return Ok(TrialResult {
            linear: lin.errors[1..].to_vec(),
            nonlinear: nl.errors[1..].to_vec(),
            redraws: salt,
        });
    }
    Err(Error::DegenerateTrial {
        trial,
        redraws: REDRAW_BUDGET as usize,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Per-iteration series, entry `k−1` for iteration `k`.
    pub mean_err_linear: Vec<f64>,
    pub mean_err_nonlinear: Vec<f64>,
    /// Mean over trials of the per-trial dB reduction.
    pub mean_red_db: Vec<f64>,
    pub q1_red_db: Vec<f64>,
    pub q3_red_db: Vec<f64>,
    /// dB reduction of the mean errors.
    pub db_of_means: Vec<f64>,
    pub redraws: u64,
    /// Mean nonlinear error ≤ mean linear error at every iteration.
    pub nonlinear_dominates: bool,
    #[serde(skip)]
    pub raw: Option<Vec<TrialResult>>,
}

impl ExperimentReport {
    pub fn iters(&self) -> usize {
        self.mean_red_db.len()
    }

    /// Slope of `ln(mean error)` per iteration between iterations `from`
    /// and `to` (1-based), for the linear and nonlinear series.
    pub fn log_slopes(&self, from: usize, to: usize) -> (f64, f64) {
        assert!(1 <= from && from < to && to <= self.iters());
        let slope = |s: &[f64]| (s[to - 1].ln() - s[from - 1].ln()) / (to - from) as f64;
        (slope(&self.mean_err_linear), slope(&self.mean_err_nonlinear))
    }
}

/// Inclusive nearest-rank quantile of sorted data: the `⌈pN⌉`-th value.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Worker threads from `DECLIP_THREADS`; 0 or unset lets the pool decide.
pub fn threads_from_env() -> usize {
    std::env::var("DECLIP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with(cfg, threads_from_env(), false)
}

/// Runs all trials on a pool of `threads` workers (0 = automatic) and
/// aggregates them in trial order.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    threads: usize,
    keep_raw: bool,
) -> Result<ExperimentReport> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let trials: Vec<TrialResult> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, t))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(aggregate(cfg, trials, keep_raw))
}

fn aggregate(cfg: &ExperimentConfig, trials: Vec<TrialResult>, keep_raw: bool) -> ExperimentReport {
    let iters = cfg.iters;
    let count = trials.len() as f64;
    let mut report = ExperimentReport {
        config: cfg.clone(),
        mean_err_linear: Vec::with_capacity(iters),
        mean_err_nonlinear: Vec::with_capacity(iters),
        mean_red_db: Vec::with_capacity(iters),
        q1_red_db: Vec::with_capacity(iters),
        q3_red_db: Vec::with_capacity(iters),
        db_of_means: Vec::with_capacity(iters),
        redraws: trials.iter().map(|t| t.redraws).sum(),
        nonlinear_dominates: true,
        raw: None,
    };
    let mut dbs = Vec::with_capacity(trials.len());
    for k in 0..iters {
        let mut sum_lin = 0.0;
        let mut sum_nl = 0.0;
        let mut sum_db = 0.0;
        dbs.clear();
        for t in &trials {
            sum_lin += t.linear[k];
            sum_nl += t.nonlinear[k];
            let db = reduction_db(t.linear[k], t.nonlinear[k]);
            sum_db += db;
            dbs.push(db);
        }
        dbs.sort_by(f64::total_cmp);
        let (ml, mn) = (sum_lin / count, sum_nl / count);
        report.mean_err_linear.push(ml);
        report.mean_err_nonlinear.push(mn);
        report.mean_red_db.push(sum_db / count);
        report.q1_red_db.push(nearest_rank(&dbs, 0.25));
        report.q3_red_db.push(nearest_rank(&dbs, 0.75));
        report.db_of_means.push(reduction_db(ml, mn));
        if mn > ml {
            report.nonlinear_dominates = false;
        }
    }
    if !report.nonlinear_dominates {
        log::warn!(
            "mean nonlinear error exceeds mean linear error at some iteration (lambda {})",
            cfg.lambda
        );
    }
    if report.redraws > 0 {
        log::info!("{} degenerate draws replaced", report.redraws);
    }
    if keep_raw {
        report.raw = Some(trials);
    }
    report
}

pub fn summary_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for k in 0..report.iters() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            k + 1,
            fmt_float(report.mean_err_linear[k]),
            fmt_float(report.mean_err_nonlinear[k]),
            fmt_float(report.mean_red_db[k]),
            fmt_float(report.q1_red_db[k]),
            fmt_float(report.q3_red_db[k]),
        );
    }
    out
}

pub fn raw_csv(trials: &[TrialResult]) -> String {
    let mut out = String::from(RAW_HEADER);
    out.push('\n');
    for (t, r) in trials.iter().enumerate() {
        for k in 0..r.linear.len() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                t,
                k + 1,
                fmt_float(r.linear[k]),
                fmt_float(r.nonlinear[k])
            );
        }
    }
    out
}

/// gnuplot-style blocks, one per curve, separated by two blank lines;
/// each block is `iter value` pairs under a `# name` comment.
pub fn plot_data(report: &ExperimentReport) -> String {
    let curves: [(&str, &[f64]); 6] = [
        ("mean_err_linear", &report.mean_err_linear),
        ("mean_err_nonlinear", &report.mean_err_nonlinear),
        ("mean_red_db", &report.mean_red_db),
        ("q1_red_db", &report.q1_red_db),
        ("q3_red_db", &report.q3_red_db),
        ("db_of_means", &report.db_of_means),
    ];
    let mut out = String::new();
    for (i, (name, series)) in curves.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# {name}");
        for (k, v) in series.iter().enumerate() {
            let _ = writeln!(out, "{} {}", k + 1, fmt_float(*v));
        }
    }
    out
}

/// Writes `summary.csv`, `plot.dat` and, when the report kept per-trial
/// data, `raw.csv` into `dir`. Returns the paths written.
pub fn emit_report(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = vec![
        (dir.join("summary.csv"), summary_csv(report)),
        (dir.join("plot.dat"), plot_data(report)),
    ];
    if let Some(raw) = &report.raw {
        files.push((dir.join("raw.csv"), raw_csv(raw)));
    }
    let mut written = Vec::new();
    for (path, body) in files {
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Columns of a parsed `summary.csv`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub mean_err_linear: Vec<f64>,
    pub mean_err_nonlinear: Vec<f64>,
    pub mean_red_db: Vec<f64>,
    pub q1_red_db: Vec<f64>,
    pub q3_red_db: Vec<f64>,
}

pub fn parse_summary(text: &str, path: &Path) -> Result<Summary> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines();
    if lines.next() != Some(SUMMARY_HEADER) {
        return Err(err(1, "unexpected header".into()));
    }
    let mut s = Summary::default();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(err(lineno, format!("expected 6 fields, got {}", fields.len())));
        }
        let iter: usize = fields[0]
            .parse()
            .map_err(|_| err(lineno, format!("bad iteration {:?}", fields[0])))?;
        if iter != i + 1 {
            return Err(err(lineno, format!("iteration {iter} out of order")));
        }
        let mut vals = [0.0; 5];
        for (v, f) in vals.iter_mut().zip(&fields[1..]) {
            *v = f
                .parse()
                .map_err(|_| err(lineno, format!("bad number {f:?}")))?;
        }
        s.mean_err_linear.push(vals[0]);
        s.mean_err_nonlinear.push(vals[1]);
        s.mean_red_db.push(vals[2]);
        s.q1_red_db.push(vals[3]);
        s.q3_red_db.push(vals[4]);
    }
    Ok(s)
}
