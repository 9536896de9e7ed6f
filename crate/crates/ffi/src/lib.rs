//! C interface to `declip`.
//!
//! Every fallible call returns a [`DeclipStatus`]. On failure the message is
//! stored per thread and read back with [`declip_last_error_message`]. Handles
//! are owned by the caller and released with the matching `_free` function;
//! passing NULL to a `_free` function is a no-op.
//!
//! Array arguments are `(pointer, length)` pairs. A NULL pointer is accepted
//! only together with length 0. Output buffers must hold at least the
//! documented number of entries, otherwise the call fails with
//! `DECLIP_STATUS_BUFFER_TOO_SMALL` and writes nothing.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use declip::experiments::{self, ExperimentConfig, ExperimentReport};
use declip::packing::{self, LambdaC};
use declip::recovery::{self, RecoveryTrace, StepSchedule};
use declip::{frames, saturation, Error, Frame, Mat, Rng};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclipStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BadShape = 3,
    NotAFrame = 4,
    NotUnitNorm = 5,
    NotParseval = 6,
    NotFullSpark = 7,
    BadLambda = 8,
    BadCoeffs = 9,
    StepOutOfRange = 10,
    Numeric = 11,
    DegenerateTrial = 12,
    Io = 13,
    Parse = 14,
    BufferTooSmall = 15,
    Panic = 16,
}

/// Exact value for `n + 1` vectors in dimension `n`.
pub const DECLIP_LAMBDA_EXACT: i32 = 0;
/// Certified interval from the packing constant.
pub const DECLIP_LAMBDA_BOUNDS: i32 = 1;
/// Multi-start ascent; the value is attained, hence a lower bound.
pub const DECLIP_LAMBDA_ESTIMATE: i32 = 2;
/// Dense circle search, plane frames only.
pub const DECLIP_LAMBDA_ORACLE_N2: i32 = 3;

pub const DECLIP_SERIES_MEAN_ERR_LINEAR: i32 = 0;
pub const DECLIP_SERIES_MEAN_ERR_NONLINEAR: i32 = 1;
pub const DECLIP_SERIES_MEAN_RED_DB: i32 = 2;
pub const DECLIP_SERIES_Q1_RED_DB: i32 = 3;
pub const DECLIP_SERIES_Q3_RED_DB: i32 = 4;
pub const DECLIP_SERIES_DB_OF_MEANS: i32 = 5;

/// Opaque frame handle.
pub struct DeclipFrame(Frame);

/// Opaque record of one reconstruction run.
pub struct DeclipTrace(RecoveryTrace);

/// Opaque aggregated Monte Carlo report.
pub struct DeclipReport(ExperimentReport);

/// Critical level as returned by [`declip_lambda_c`].
///
/// `lower <= value <= upper`; an end that the method does not provide is NaN.
/// `upper_certified` is false when the upper end came from a heuristic
/// subset search or is absent.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeclipLambdaC {
    pub method: i32,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub upper_certified: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeclipExperimentConfig {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub trials: usize,
    pub iters: usize,
    pub master_seed: u64,
}

impl From<DeclipExperimentConfig> for ExperimentConfig {
    fn from(c: DeclipExperimentConfig) -> Self {
        ExperimentConfig {
            n: c.n,
            m: c.m,
            lambda: c.lambda,
            trials: c.trials,
            iters: c.iters,
            master_seed: c.master_seed,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: DeclipStatus,
    message: String,
}

impl Failure {
    fn new(status: DeclipStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Failure::new(DeclipStatus::NullPointer, format!("{what} is NULL"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::NonSymmetric { .. } | Error::NonFinite { .. } | Error::NoConvergence { .. } => {
                DeclipStatus::Numeric
            }
            Error::BadShape(_) => DeclipStatus::BadShape,
            Error::NotAFrame { .. } => DeclipStatus::NotAFrame,
            Error::NotUnitNorm { .. } => DeclipStatus::NotUnitNorm,
            Error::NotParseval { .. } => DeclipStatus::NotParseval,
            Error::NotFullSpark(_) => DeclipStatus::NotFullSpark,
            Error::BadLambda(_) => DeclipStatus::BadLambda,
            Error::BadCoeffs { .. } => DeclipStatus::BadCoeffs,
            Error::StepOutOfRange { .. } => DeclipStatus::StepOutOfRange,
            Error::DegenerateTrial { .. } => DeclipStatus::DegenerateTrial,
            Error::InvalidArgument(_) => DeclipStatus::InvalidArgument,
            Error::Parse { .. } => DeclipStatus::Parse,
            Error::Io { .. } => DeclipStatus::Io,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    // Interior NULs would truncate the C string; replace them.
    let c = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DeclipStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DeclipStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message);
            fail.status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {what}"));
            DeclipStatus::Panic
        }
    }
}

unsafe fn input<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn output(ptr: *mut f64, len: usize, values: &[f64], what: &str) -> Result<(), Failure> {
    if len < values.len() {
        return Err(Failure::new(
            DeclipStatus::BufferTooSmall,
            format!("{what} holds {len} entries, {} needed", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if ptr.is_null() {
        return Err(Failure::null(what));
    }
    std::slice::from_raw_parts_mut(ptr, values.len()).copy_from_slice(values);
    Ok(())
}

unsafe fn write_out<T>(ptr: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        return Err(Failure::null(what));
    }
    ptr.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn path_arg(ptr: *const c_char) -> Result<PathBuf, Failure> {
    if ptr.is_null() {
        return Err(Failure::null("path"));
    }
    let s = CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure::new(DeclipStatus::InvalidArgument, "path is not valid UTF-8"))?;
    Ok(PathBuf::from(s))
}

unsafe fn new_frame(out: *mut *mut DeclipFrame, frame: Frame) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(DeclipFrame(frame))), "out")
}

/// Message of the most recent failure on the calling thread, or NULL.
///
/// The string stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn declip_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn declip_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `m` unit vectors in ℝⁿ drawn uniformly from the sphere.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_random(n: usize, m: usize, seed: u64, out: *mut *mut DeclipFrame) -> DeclipStatus {
    guard(|| {
        let mut rng = Rng::seed_from_u64(seed);
        new_frame(out, frames::random_unit_frame(n, m, &mut rng)?)
    })
}

/// Standard basis of ℝⁿ.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_onb(n: usize, out: *mut *mut DeclipFrame) -> DeclipStatus {
    guard(|| new_frame(out, frames::orthonormal_basis(n)?))
}

/// `n + 1` unit vectors of the regular simplex in ℝⁿ.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_etf(n: usize, out: *mut *mut DeclipFrame) -> DeclipStatus {
    guard(|| new_frame(out, frames::simplex_etf(n)?))
}

/// Frame whose `m` vectors are the rows of the row-major `m × n` matrix.
///
/// # Safety
/// `rows` must point to `m * n` doubles; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_from_rows(
    rows: *const f64,
    m: usize,
    n: usize,
    out: *mut *mut DeclipFrame,
) -> DeclipStatus {
    guard(|| {
        let len = m
            .checked_mul(n)
            .ok_or_else(|| Failure::new(DeclipStatus::BadShape, "m * n overflows"))?;
        let data = input(rows, len, "rows")?.to_vec();
        new_frame(out, Frame::from_analysis(Mat::new(m, n, data)?)?)
    })
}

/// Frame read from the text format (one vector per line).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_read(path: *const c_char, out: *mut *mut DeclipFrame) -> DeclipStatus {
    guard(|| new_frame(out, Frame::read(&path_arg(path)?)?))
}

/// # Safety
/// `frame` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_write(frame: *const DeclipFrame, path: *const c_char) -> DeclipStatus {
    guard(|| Ok(handle(frame, "frame")?.0.write(&path_arg(path)?)?))
}

/// # Safety
/// `frame` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_free(frame: *mut DeclipFrame) {
    if !frame.is_null() {
        drop(Box::from_raw(frame));
    }
}

/// Ambient dimension `n`; 0 for NULL.
///
/// # Safety
/// `frame` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_dim(frame: *const DeclipFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.0.dim())
}

/// Number of vectors `m`; 0 for NULL.
///
/// # Safety
/// `frame` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_len(frame: *const DeclipFrame) -> usize {
    frame.as_ref().map_or(0, |f| f.0.len())
}

/// Copies the vectors as a row-major `m × n` matrix into `out`.
///
/// # Safety
/// `frame` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_vectors(frame: *const DeclipFrame, out: *mut f64, out_len: usize) -> DeclipStatus {
    guard(|| output(out, out_len, handle(frame, "frame")?.0.analysis_matrix().as_slice(), "out"))
}

/// Optimal frame bounds `A ≤ B`.
///
/// # Safety
/// `frame` must be a live handle; `lower`, `upper` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_bounds(frame: *const DeclipFrame, lower: *mut f64, upper: *mut f64) -> DeclipStatus {
    guard(|| {
        let b = handle(frame, "frame")?.0.bounds()?;
        write_out(lower, b.lower, "lower")?;
        write_out(upper, b.upper, "upper")
    })
}

/// Largest `|⟨x_i, x_j⟩|` over distinct unit vectors.
///
/// # Safety
/// `frame` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_coherence(frame: *const DeclipFrame, out: *mut f64) -> DeclipStatus {
    guard(|| write_out(out, handle(frame, "frame")?.0.coherence()?, "out"))
}

/// Whether every `n` of the vectors span ℝⁿ.
///
/// # Safety
/// `frame` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_is_full_spark(frame: *const DeclipFrame, out: *mut bool) -> DeclipStatus {
    guard(|| write_out(out, handle(frame, "frame")?.0.is_full_spark(), "out"))
}

/// The Parseval frame `S^{-1/2}x_j`.
///
/// # Safety
/// `frame` must be a live handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_canonical_parseval(
    frame: *const DeclipFrame,
    out: *mut *mut DeclipFrame,
) -> DeclipStatus {
    guard(|| new_frame(out, handle(frame, "frame")?.0.canonical_parseval()?))
}

/// Coefficients `⟨x, x_j⟩`; `x` has `n` entries, `out` receives `m`.
///
/// # Safety
/// `frame` must be a live handle; buffers must match their lengths.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_analysis(
    frame: *const DeclipFrame,
    x: *const f64,
    x_len: usize,
    out: *mut f64,
    out_len: usize,
) -> DeclipStatus {
    guard(|| {
        let c = handle(frame, "frame")?.0.analysis(input(x, x_len, "x")?)?;
        output(out, out_len, &c, "out")
    })
}

/// `Σ c_j x_j`; `c` has `m` entries, `out` receives `n`.
///
/// # Safety
/// `frame` must be a live handle; buffers must match their lengths.
#[no_mangle]
pub unsafe extern "C" fn declip_frame_synthesis(
    frame: *const DeclipFrame,
    c: *const f64,
    c_len: usize,
    out: *mut f64,
    out_len: usize,
) -> DeclipStatus {
    guard(|| {
        let x = handle(frame, "frame")?.0.synthesis(input(c, c_len, "c")?)?;
        output(out, out_len, &x, "out")
    })
}

/// Clamps each entry to `[-lambda, lambda]`; `out` receives `len` entries.
///
/// # Safety
/// `c` and `out` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn declip_saturate(c: *const f64, len: usize, lambda: f64, out: *mut f64) -> DeclipStatus {
    guard(|| {
        let s = saturation::saturate(input(c, len, "c")?, lambda)?;
        output(out, len, &s, "out")
    })
}

/// Lower bound on the coherence of `m` unit vectors in ℝⁿ.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn declip_welch_bound(m: usize, n: usize, out: *mut f64) -> DeclipStatus {
    guard(|| write_out(out, packing::welch_bound(m, n)?, "out"))
}

/// Critical saturation level by one of the `DECLIP_LAMBDA_*` methods.
///
/// `restarts` and `seed` are read by the estimator only.
///
/// # Safety
/// `frame` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn declip_lambda_c(
    frame: *const DeclipFrame,
    method: i32,
    restarts: usize,
    seed: u64,
    out: *mut DeclipLambdaC,
) -> DeclipStatus {
    guard(|| {
        let f = &handle(frame, "frame")?.0;
        let result = match method {
            DECLIP_LAMBDA_EXACT => packing::lambda_c_exact_simplex_case(f)?,
            DECLIP_LAMBDA_BOUNDS => packing::lambda_c_bounds(f)?,
            DECLIP_LAMBDA_ESTIMATE => packing::lambda_c_estimate(f, restarts, &mut Rng::seed_from_u64(seed))?,
            DECLIP_LAMBDA_ORACLE_N2 => packing::lambda_c_oracle_n2(f)?,
            other => {
                return Err(Failure::new(
                    DeclipStatus::InvalidArgument,
                    format!("unknown critical-level method {other}"),
                ))
            }
        };
        let value = result.value();
        let (lower, upper, upper_certified) = match result {
            LambdaC::Exact { value, .. } | LambdaC::Oracle { value, .. } => (value, value, true),
            LambdaC::Interval {
                lower,
                upper,
                exhaustive,
                ..
            } => (lower, upper, exhaustive),
            LambdaC::Estimate { value, .. } => (value, f64::NAN, false),
        };
        write_out(
            out,
            DeclipLambdaC {
                method,
                value,
                lower,
                upper,
                upper_certified,
            },
            "out",
        )
    })
}

unsafe fn new_trace(out: *mut *mut DeclipTrace, trace: RecoveryTrace) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(DeclipTrace(trace))), "out")
}

unsafe fn truth_arg<'a>(truth: *const f64, n: usize) -> Result<Option<&'a [f64]>, Failure> {
    if truth.is_null() {
        Ok(None)
    } else {
        input(truth, n, "truth").map(Some)
    }
}

/// Linear frame algorithm on `frame` from `m` coefficients.
///
/// `truth` is NULL or `n` entries; with it, errors are `‖x − y_k‖`.
///
/// # Safety
/// `frame` must be a live handle; buffers must match their lengths; `out`
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn declip_recover_linear(
    frame: *const DeclipFrame,
    coeffs: *const f64,
    coeffs_len: usize,
    alpha: f64,
    iters: usize,
    truth: *const f64,
    out: *mut *mut DeclipTrace,
) -> DeclipStatus {
    guard(|| {
        let f = &handle(frame, "frame")?.0;
        let t = recovery::linear_frame_algorithm(
            f,
            input(coeffs, coeffs_len, "coeffs")?,
            alpha,
            iters,
            truth_arg(truth, f.dim())?,
        )?;
        new_trace(out, t)
    })
}

/// λ-saturated frame algorithm with constant coefficients `alpha`, `beta`.
///
/// # Safety
/// As for [`declip_recover_linear`].
#[no_mangle]
pub unsafe extern "C" fn declip_recover_saturated(
    frame: *const DeclipFrame,
    coeffs: *const f64,
    coeffs_len: usize,
    lambda: f64,
    alpha: f64,
    beta: f64,
    iters: usize,
    truth: *const f64,
    out: *mut *mut DeclipTrace,
) -> DeclipStatus {
    guard(|| {
        let f = &handle(frame, "frame")?.0;
        let t = recovery::saturated_frame_algorithm(
            f,
            input(coeffs, coeffs_len, "coeffs")?,
            lambda,
            &StepSchedule::constant(alpha, beta),
            iters,
            truth_arg(truth, f.dim())?,
        )?;
        new_trace(out, t)
    })
}

/// # Safety
/// `trace` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn declip_trace_free(trace: *mut DeclipTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Number of iterations `K`; the trace holds `y_0, …, y_K`. 0 for NULL.
///
/// # Safety
/// `trace` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn declip_trace_iterations(trace: *const DeclipTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.iterations())
}

/// Iterate `y_k` for `0 ≤ k ≤ K` into `out` (`n` entries).
///
/// # Safety
/// `trace` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn declip_trace_iterate(
    trace: *const DeclipTrace,
    k: usize,
    out: *mut f64,
    out_len: usize,
) -> DeclipStatus {
    guard(|| {
        let t = &handle(trace, "trace")?.0;
        let y = t.iterates.get(k).ok_or_else(|| {
            Failure::new(
                DeclipStatus::InvalidArgument,
                format!("iteration {k} beyond {}", t.iterations()),
            )
        })?;
        output(out, out_len, y, "out")
    })
}

/// Errors for `k = 0..=K` (`K + 1` entries): distance to the truth when it was
/// supplied, otherwise the residual.
///
/// # Safety
/// `trace` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn declip_trace_errors(trace: *const DeclipTrace, out: *mut f64, out_len: usize) -> DeclipStatus {
    guard(|| output(out, out_len, &handle(trace, "trace")?.0.errors, "out"))
}

/// Residuals `‖Φ_λΘy_k − c‖` for `k = 0..=K`.
///
/// # Safety
/// `trace` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn declip_trace_residuals(trace: *const DeclipTrace, out: *mut f64, out_len: usize) -> DeclipStatus {
    guard(|| output(out, out_len, &handle(trace, "trace")?.0.residuals, "out"))
}

/// 10 × 30 frames, λ = 0.4, 1000 trials of 50 iterations, seed 42.
#[no_mangle]
pub extern "C" fn declip_experiment_default_config() -> DeclipExperimentConfig {
    let d = ExperimentConfig::default();
    DeclipExperimentConfig {
        n: d.n,
        m: d.m,
        lambda: d.lambda,
        trials: d.trials,
        iters: d.iters,
        master_seed: d.master_seed,
    }
}

/// Runs the Monte Carlo comparison on `threads` workers (0 = automatic).
/// The report does not depend on `threads`.
///
/// # Safety
/// `config` must be readable; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn declip_experiment_run(
    config: *const DeclipExperimentConfig,
    threads: usize,
    keep_raw: bool,
    out: *mut *mut DeclipReport,
) -> DeclipStatus {
    guard(|| {
        let cfg = ExperimentConfig::from(*handle(config, "config")?);
        let report = experiments::run_experiment_with(&cfg, threads, keep_raw)?;
        write_out(out, Box::into_raw(Box::new(DeclipReport(report))), "out")
    })
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn declip_report_free(report: *mut DeclipReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Iterations per series; 0 for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn declip_report_iters(report: *const DeclipReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.iters())
}

/// Total redraws of degenerate trials; 0 for NULL.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn declip_report_redraws(report: *const DeclipReport) -> u64 {
    report.as_ref().map_or(0, |r| r.0.redraws)
}

/// Whether the mean nonlinear error never exceeds the mean linear error.
///
/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn declip_report_nonlinear_dominates(report: *const DeclipReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.nonlinear_dominates)
}

/// One of the `DECLIP_SERIES_*` series; entry `k − 1` is iteration `k`.
///
/// # Safety
/// `report` must be a live handle; `out` must hold `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn declip_report_series(
    report: *const DeclipReport,
    series: i32,
    out: *mut f64,
    out_len: usize,
) -> DeclipStatus {
    guard(|| {
        let r = &handle(report, "report")?.0;
        let values = match series {
            DECLIP_SERIES_MEAN_ERR_LINEAR => &r.mean_err_linear,
            DECLIP_SERIES_MEAN_ERR_NONLINEAR => &r.mean_err_nonlinear,
            DECLIP_SERIES_MEAN_RED_DB => &r.mean_red_db,
            DECLIP_SERIES_Q1_RED_DB => &r.q1_red_db,
            DECLIP_SERIES_Q3_RED_DB => &r.q3_red_db,
            DECLIP_SERIES_DB_OF_MEANS => &r.db_of_means,
            other => {
                return Err(Failure::new(
                    DeclipStatus::InvalidArgument,
                    format!("unknown series {other}"),
                ))
            }
        };
        output(out, out_len, values, "out")
    })
}

/// Writes `summary.csv`, `plot.dat` and, when kept, `raw.csv` into `dir`.
///
/// # Safety
/// `report` must be a live handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn declip_report_write(report: *const DeclipReport, dir: *const c_char) -> DeclipStatus {
    guard(|| {
        experiments::emit_report(&handle(report, "report")?.0, &path_arg(dir)?)?;
        Ok(())
    })
}
