//! Iterative reconstruction from frame coefficients: the linear frame
//! iteration and its saturation-aware variant.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt_float;
use crate::frames::Frame;
use crate::numerics::{self, distance, norm};
use crate::saturation::{self, RelativeSaturation};

/// Coefficients `|c_j| ≥ λ − SATURATION_DETECT_TOL` are read as clipped.
pub const SATURATION_DETECT_TOL: f64 = 1e-12;

/// Step coefficients `α_k` (unsaturated terms) and `β_k` (saturated terms).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    Constant { alpha: f64, beta: f64 },
    /// Per-iteration coefficients; iteration `k` uses entry `k`.
    Sequence { alpha: Vec<f64>, beta: Vec<f64> },
}

impl StepSchedule {
    pub fn constant(alpha: f64, beta: f64) -> Self {
        StepSchedule::Constant { alpha, beta }
    }

    /// `α_k = β_k = 2/(A+B)` from the bounds of the full frame.
    pub fn optimal_for(frame: &Frame) -> Result<Self> {
        let step = frame.bounds()?.optimal_step();
        Ok(StepSchedule::constant(step, step))
    }

    pub fn at(&self, k: usize) -> (f64, f64) {
        match self {
            StepSchedule::Constant { alpha, beta } => (*alpha, *beta),
            StepSchedule::Sequence { alpha, beta } => (alpha[k], beta[k]),
        }
    }

    fn validate(&self, iters: usize) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        match self {
            StepSchedule::Constant { alpha, beta } => {
                if !ok(*alpha) || !ok(*beta) {
                    return Err(Error::InvalidArgument(format!(
                        "step coefficients must be finite and >= 0 (alpha {alpha}, beta {beta})"
                    )));
                }
            }
            StepSchedule::Sequence { alpha, beta } => {
                if alpha.len() < iters || beta.len() < iters {
                    return Err(Error::InvalidArgument(format!(
                        "schedule has {} alphas and {} betas for {iters} iterations",
                        alpha.len(),
                        beta.len()
                    )));
                }
                if !alpha.iter().chain(beta).all(|v| ok(*v)) {
                    return Err(Error::InvalidArgument(
                        "step coefficients must be finite and >= 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Record of one reconstruction run, indexed by iteration `k = 0..=K`.
#[derive(Clone, Debug, Serialize)]
pub struct RecoveryTrace {
    /// `y_0 = 0, y_1, …, y_K`.
    pub iterates: Vec<Vec<f64>>,
    /// `‖x − y_k‖` when ground truth was supplied, otherwise the residual.
    pub errors: Vec<f64>,
    /// `‖Φ_λΘy_k − c‖` (plain `‖Θy_k − c‖` for the linear iteration).
    pub residuals: Vec<f64>,
    /// Active saturated sets relative to `y_k`.
    pub active_sets: Vec<RelativeSaturation>,
    pub schedule: StepSchedule,
    pub has_ground_truth: bool,
}

impl RecoveryTrace {
    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn last(&self) -> &[f64] {
        self.iterates.last().unwrap()
    }

    /// `errors[k+1] / errors[k]`, skipping steps whose starting error is 0.
    pub fn step_ratios(&self) -> Vec<f64> {
        self.errors
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    }

    /// CSV with header `iter,error,residual,n_pos_active,n_neg_active`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,error,residual,n_pos_active,n_neg_active\n");
        for k in 0..self.iterates.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                k,
                fmt_float(self.errors[k]),
                fmt_float(self.residuals[k]),
                self.active_sets[k].pos_active.len(),
                self.active_sets[k].neg_active.len()
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// `C_α = max(|1 − αA|, |1 − αB|)`.
pub fn convergence_factor(lower: f64, upper: f64, alpha: f64) -> f64 {
    (1.0 - alpha * lower).abs().max((1.0 - alpha * upper).abs())
}

fn check_iters(iters: usize) -> Result<()> {
    if iters == 0 {
        return Err(Error::InvalidArgument("iters must be at least 1".into()));
    }
    Ok(())
}

fn check_truth(frame: &Frame, truth: Option<&[f64]>) -> Result<()> {
    if let Some(x) = truth {
        if x.len() != frame.dim() {
            return Err(Error::BadShape(format!(
                "ground truth of length {} for dimension {}",
                x.len(),
                frame.dim()
            )));
        }
    }
    Ok(())
}

/// Linear frame algorithm `y_{k+1} = y_k + αΘ*(c − Θy_k)`, `y_0 = 0`.
///
/// `frame` is the collection the coefficients belong to (for recovery from
/// unsaturated data, the unsaturated sub-collection).
pub fn linear_frame_algorithm(
    frame: &Frame,
    coeffs: &[f64],
    alpha: f64,
    iters: usize,
    ground_truth: Option<&[f64]>,
) -> Result<RecoveryTrace> {
    check_iters(iters)?;
    check_truth(frame, ground_truth)?;
    if coeffs.len() != frame.len() {
        return Err(Error::BadShape(format!(
            "{} coefficients for {} frame vectors",
            coeffs.len(),
            frame.len()
        )));
    }
    if !numerics::all_finite(coeffs) {
        return Err(Error::NonFinite {
            context: "coefficients",
        });
    }
    let upper = frame.upper_bound();
    if !(alpha > 0.0 && alpha < 2.0 / upper) {
        return Err(Error::StepOutOfRange { alpha, upper });
    }

    let n = frame.dim();
    let mut y = vec![0.0; n];
    let mut trace = empty_trace(iters, StepSchedule::constant(alpha, 0.0), ground_truth);
    for k in 0..=iters {
        let cy = frame.analysis(&y)?;
        let resid: Vec<f64> = coeffs.iter().zip(&cy).map(|(c, t)| c - t).collect();
        trace.residuals.push(norm(&resid));
        trace.errors.push(match ground_truth {
            Some(x) => distance(x, &y),
            None => norm(&resid),
        });
        trace.active_sets.push(RelativeSaturation::default());
        trace.iterates.push(y.clone());
        if k == iters {
            break;
        }
        let weights: Vec<f64> = resid.iter().map(|r| alpha * r).collect();
        let step = frame.synthesis(&weights)?;
        for (yi, si) in y.iter_mut().zip(step) {
            *yi += si;
        }
    }
    Ok(trace)
}

fn empty_trace(iters: usize, schedule: StepSchedule, truth: Option<&[f64]>) -> RecoveryTrace {
    RecoveryTrace {
        iterates: Vec::with_capacity(iters + 1),
        errors: Vec::with_capacity(iters + 1),
        residuals: Vec::with_capacity(iters + 1),
        active_sets: Vec::with_capacity(iters + 1),
        schedule,
        has_ground_truth: truth.is_some(),
    }
}

/// Index sets read off clipped coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredPattern {
    pub unsaturated: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

impl MeasuredPattern {
    /// Entries within [`SATURATION_DETECT_TOL`] of `±λ` are taken as clipped;
    /// a receiver of clipped data cannot tell them apart from the boundary.
    pub fn from_saturated(sat_coeffs: &[f64], lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::BadLambda(lambda));
        }
        let mut p = MeasuredPattern {
            unsaturated: Vec::new(),
            positive: Vec::new(),
            negative: Vec::new(),
        };
        for (index, &value) in sat_coeffs.iter().enumerate() {
            if !value.is_finite() || value.abs() > lambda + SATURATION_DETECT_TOL {
                return Err(Error::BadCoeffs {
                    index,
                    value,
                    lambda,
                });
            }
            if value >= lambda - SATURATION_DETECT_TOL {
                p.positive.push(index);
            } else if value <= -lambda + SATURATION_DETECT_TOL {
                p.negative.push(index);
            } else {
                p.unsaturated.push(index);
            }
        }
        Ok(p)
    }
}

/// One step of the saturated iteration from `y` given the partition.
///
/// The update weights are `α(c_j − ⟨y,x_j⟩)` on unsaturated indices and
/// `β(±λ − ⟨y,x_j⟩)` on the saturated indices `y` has not yet pushed past
/// `±λ`.
pub(crate) fn saturated_step(
    frame: &Frame,
    coeffs: &[f64],
    unsaturated: &[usize],
    active: &RelativeSaturation,
    cy: &[f64],
    lambda: f64,
    alpha: f64,
    beta: f64,
    y: &[f64],
) -> Vec<f64> {
    let mut weights = vec![0.0; frame.len()];
    for &j in unsaturated {
        weights[j] = alpha * (coeffs[j] - cy[j]);
    }
    for &j in &active.pos_active {
        weights[j] = beta * (lambda - cy[j]);
    }
    for &j in &active.neg_active {
        weights[j] = beta * (-lambda - cy[j]);
    }
    let step = frame.synthesis(&weights).expect("weights sized to frame");
    y.iter().zip(step).map(|(a, b)| a + b).collect()
}

/// λ-saturated frame algorithm started from `y_0 = 0`.
pub fn saturated_frame_algorithm(
    frame: &Frame,
    sat_coeffs: &[f64],
    lambda: f64,
    schedule: &StepSchedule,
    iters: usize,
    ground_truth: Option<&[f64]>,
) -> Result<RecoveryTrace> {
    run_saturated(frame, sat_coeffs, lambda, schedule, iters, ground_truth, None)
}

/// As [`saturated_frame_algorithm`], stopping early once the residual
/// `‖Φ_λΘy_k − c‖` drops below `tol`.
pub fn saturated_frame_algorithm_until(
    frame: &Frame,
    sat_coeffs: &[f64],
    lambda: f64,
    schedule: &StepSchedule,
    max_iters: usize,
    ground_truth: Option<&[f64]>,
    tol: f64,
) -> Result<RecoveryTrace> {
    run_saturated(
        frame,
        sat_coeffs,
        lambda,
        schedule,
        max_iters,
        ground_truth,
        Some(tol),
    )
}

fn run_saturated(
    frame: &Frame,
    sat_coeffs: &[f64],
    lambda: f64,
    schedule: &StepSchedule,
    iters: usize,
    ground_truth: Option<&[f64]>,
    tol: Option<f64>,
) -> Result<RecoveryTrace> {
    check_iters(iters)?;
    check_truth(frame, ground_truth)?;
    schedule.validate(iters)?;
    if sat_coeffs.len() != frame.len() {
        return Err(Error::BadShape(format!(
            "{} coefficients for {} frame vectors",
            sat_coeffs.len(),
            frame.len()
        )));
    }
    let measured = MeasuredPattern::from_saturated(sat_coeffs, lambda)?;

    let mut y = vec![0.0; frame.dim()];
    let mut trace = empty_trace(iters, schedule.clone(), ground_truth);
    for k in 0..=iters {
        let cy = frame.analysis(&y)?;
        let clipped = saturation::saturate(&cy, lambda)?;
        let resid = distance(&clipped, sat_coeffs);
        let active =
            RelativeSaturation::from_sets(&measured.positive, &measured.negative, &cy, lambda);
        trace.residuals.push(resid);
        trace.errors.push(match ground_truth {
            Some(x) => distance(x, &y),
            None => resid,
        });
        trace.iterates.push(y.clone());
        let done = k == iters || tol.is_some_and(|t| resid < t);
        if done {
            trace.active_sets.push(active);
            break;
        }
        let (alpha, beta) = schedule.at(k);
        y = saturated_step(
            frame,
            sat_coeffs,
            &measured.unsaturated,
            &active,
            &cy,
            lambda,
            alpha,
            beta,
            &y,
        );
        trace.active_sets.push(active);
    }
    Ok(trace)
}

/// One-step comparison of the two iterations from a common iterate.
#[derive(Clone, Debug, Serialize)]
pub struct StepComparison {
    /// Optimal lower bound of the unsaturated vectors at `x`.
    pub lower_unsaturated: f64,
    /// Optimal lower bound after adding the active saturated vectors.
    pub lower_extended: f64,
    pub gap_positive: bool,
    /// `2/(A+B)` from the full frame.
    pub step: f64,
    pub start_error: f64,
    pub linear_error: f64,
    pub nonlinear_error: f64,
}

impl StepComparison {
    /// The nonlinear step is no worse than the linear one (slack 1e-9).
    pub fn nonlinear_not_worse(&self) -> bool {
        self.nonlinear_error <= self.linear_error + 1e-9
    }
}

/// Compare one step of the linear iteration on the unsaturated vectors with
/// one step of the saturated iteration, both from `y` with
/// `α = β = 2/(A+B)`.
pub fn compare_step(frame: &Frame, x: &[f64], y: &[f64], lambda: f64) -> Result<StepComparison> {
    let bounds = frame.bounds()?;
    let step = bounds.optimal_step();
    let cx = frame.analysis(x)?;
    let cy = frame.analysis(y)?;
    let pat = saturation::SaturationPattern::from_coefficients(&cx, lambda)?;
    let active = RelativeSaturation::from_sets(&pat.positive, &pat.negative, &cy, lambda);

    let lower_of = |idx: &[usize]| -> Result<(f64, f64)> {
        if idx.is_empty() {
            return Ok((0.0, 0.0));
        }
        let sub = frame.rows_of(idx);
        let eig = numerics::sym_eig(&sub.gram_cols())?.values;
        Ok((eig[0], *eig.last().unwrap()))
    };
    let (lower_unsaturated, upper_unsaturated) = lower_of(&pat.unsaturated)?;
    if !(lower_unsaturated > 1e-12 * upper_unsaturated) || pat.unsaturated.is_empty() {
        return Err(Error::NotAFrame {
            lower: lower_unsaturated,
            upper: upper_unsaturated,
        });
    }
    let mut extended = pat.unsaturated.clone();
    extended.extend(&active.pos_active);
    extended.extend(&active.neg_active);
    extended.sort_unstable();
    let (lower_extended, _) = lower_of(&extended)?;

    let sat = saturation::saturate(&cx, lambda)?;
    let none = RelativeSaturation::default();
    let y_lin = saturated_step(frame, &sat, &pat.unsaturated, &none, &cy, lambda, step, 0.0, y);
    let y_nl = saturated_step(frame, &sat, &pat.unsaturated, &active, &cy, lambda, step, step, y);
    Ok(StepComparison {
        lower_unsaturated,
        lower_extended,
        gap_positive: lower_extended - lower_unsaturated > 1e-12 * bounds.upper,
        step,
        start_error: distance(x, y),
        linear_error: distance(x, &y_lin),
        nonlinear_error: distance(x, &y_nl),
    })
}

/// Result of checking the geometric envelope
/// `‖x − y_k‖ ≤ (1 − C⁻²)^{k/2}‖x‖` on a Parseval frame.
#[derive(Clone, Debug, Serialize)]
pub struct ContractionCheck {
    pub holds: bool,
    /// Iterations at which the envelope (with slack `1 + 1e-6`) failed.
    pub violations: Vec<usize>,
    pub errors: Vec<f64>,
    pub envelope: Vec<f64>,
}

/// Run the saturated iteration with unit steps on a Parseval frame and
/// test every iterate against the envelope for stability constant `c`.
///
/// A constant valid on `2‖x‖B` is the caller's responsibility; a Monte
/// Carlo estimate only bounds the true constant from below.
pub fn parseval_contraction_check(
    frame: &Frame,
    x: &[f64],
    lambda: f64,
    c: f64,
    iters: usize,
) -> Result<ContractionCheck> {
    frame.check_parseval(1e-8)?;
    if !(c > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "stability constant must exceed 1, got {c}"
        )));
    }
    let sat = saturation::saturate(&frame.analysis(x)?, lambda)?;
    let trace = saturated_frame_algorithm(
        frame,
        &sat,
        lambda,
        &StepSchedule::constant(1.0, 1.0),
        iters,
        Some(x),
    )?;
    let rate = (1.0 - c.powi(-2)).sqrt();
    let xn = norm(x);
    let envelope: Vec<f64> = (0..=iters).map(|k| rate.powi(k as i32) * xn).collect();
    let violations: Vec<usize> = trace
        .errors
        .iter()
        .zip(&envelope)
        .enumerate()
        .filter(|(_, (e, env))| **e > **env * (1.0 + 1e-6))
        .map(|(k, _)| k)
        .collect();
    Ok(ContractionCheck {
        holds: violations.is_empty(),
        violations,
        errors: trace.errors,
        envelope,
    })
}
