#ifndef DECLIP_H
#define DECLIP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Exact value for `n + 1` vectors in dimension `n`.
 */
#define DECLIP_LAMBDA_EXACT 0

/**
 * Certified interval from the packing constant.
 */
#define DECLIP_LAMBDA_BOUNDS 1

/**
 * Multi-start ascent; the value is attained, hence a lower bound.
 */
#define DECLIP_LAMBDA_ESTIMATE 2

/**
 * Dense circle search, plane frames only.
 */
#define DECLIP_LAMBDA_ORACLE_N2 3

#define DECLIP_SERIES_MEAN_ERR_LINEAR 0

#define DECLIP_SERIES_MEAN_ERR_NONLINEAR 1

#define DECLIP_SERIES_MEAN_RED_DB 2

#define DECLIP_SERIES_Q1_RED_DB 3

#define DECLIP_SERIES_Q3_RED_DB 4

#define DECLIP_SERIES_DB_OF_MEANS 5

/**
 * Result code of every fallible call.
 */
typedef enum DeclipStatus {
  DECLIP_STATUS_OK = 0,
  DECLIP_STATUS_NULL_POINTER = 1,
  DECLIP_STATUS_INVALID_ARGUMENT = 2,
  DECLIP_STATUS_BAD_SHAPE = 3,
  DECLIP_STATUS_NOT_A_FRAME = 4,
  DECLIP_STATUS_NOT_UNIT_NORM = 5,
  DECLIP_STATUS_NOT_PARSEVAL = 6,
  DECLIP_STATUS_NOT_FULL_SPARK = 7,
  DECLIP_STATUS_BAD_LAMBDA = 8,
  DECLIP_STATUS_BAD_COEFFS = 9,
  DECLIP_STATUS_STEP_OUT_OF_RANGE = 10,
  DECLIP_STATUS_NUMERIC = 11,
  DECLIP_STATUS_DEGENERATE_TRIAL = 12,
  DECLIP_STATUS_IO = 13,
  DECLIP_STATUS_PARSE = 14,
  DECLIP_STATUS_BUFFER_TOO_SMALL = 15,
  DECLIP_STATUS_PANIC = 16,
} DeclipStatus;

/**
 * Opaque frame handle.
 */
typedef struct DeclipFrame DeclipFrame;

/**
 * Opaque aggregated Monte Carlo report.
 */
typedef struct DeclipReport DeclipReport;

/**
 * Opaque record of one reconstruction run.
 */
typedef struct DeclipTrace DeclipTrace;

/**
 * Critical level as returned by [`declip_lambda_c`].
 *
 * `lower <= value <= upper`; an end that the method does not provide is NaN.
 * `upper_certified` is false when the upper end came from a heuristic
 * subset search or is absent.
 */
typedef struct DeclipLambdaC {
  int32_t method;
  double value;
  double lower;
  double upper;
  bool upper_certified;
} DeclipLambdaC;

typedef struct DeclipExperimentConfig {
  size_t n;
  size_t m;
  double lambda;
  size_t trials;
  size_t iters;
  uint64_t master_seed;
} DeclipExperimentConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on the calling thread, or NULL.
 *
 * The string stays valid until the next failing call on the same thread.
 */
const char *declip_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *declip_version(void);

/**
 * `m` unit vectors in ℝⁿ drawn uniformly from the sphere.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum DeclipStatus declip_frame_random(size_t n, size_t m, uint64_t seed, struct DeclipFrame **out);

/**
 * Standard basis of ℝⁿ.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum DeclipStatus declip_frame_onb(size_t n, struct DeclipFrame **out);

/**
 * `n + 1` unit vectors of the regular simplex in ℝⁿ.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum DeclipStatus declip_frame_etf(size_t n, struct DeclipFrame **out);

/**
 * Frame whose `m` vectors are the rows of the row-major `m × n` matrix.
 *
 * # Safety
 * `rows` must point to `m * n` doubles; `out` must be valid for a write.
 */
enum DeclipStatus declip_frame_from_rows(const double *rows,
                                         size_t m,
                                         size_t n,
                                         struct DeclipFrame **out);

/**
 * Frame read from the text format (one vector per line).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for a write.
 */
enum DeclipStatus declip_frame_read(const char *path, struct DeclipFrame **out);

/**
 * # Safety
 * `frame` must be a live handle; `path` a NUL-terminated string.
 */
enum DeclipStatus declip_frame_write(const struct DeclipFrame *frame, const char *path);

/**
 * # Safety
 * `frame` must be NULL or a handle not yet freed.
 */
void declip_frame_free(struct DeclipFrame *frame);

/**
 * Ambient dimension `n`; 0 for NULL.
 *
 * # Safety
 * `frame` must be NULL or a live handle.
 */
size_t declip_frame_dim(const struct DeclipFrame *frame);

/**
 * Number of vectors `m`; 0 for NULL.
 *
 * # Safety
 * `frame` must be NULL or a live handle.
 */
size_t declip_frame_len(const struct DeclipFrame *frame);

/**
 * Copies the vectors as a row-major `m × n` matrix into `out`.
 *
 * # Safety
 * `frame` must be a live handle; `out` must hold `out_len` doubles.
 */
enum DeclipStatus declip_frame_vectors(const struct DeclipFrame *frame,
                                       double *out,
                                       size_t out_len);

/**
 * Optimal frame bounds `A ≤ B`.
 *
 * # Safety
 * `frame` must be a live handle; `lower`, `upper` valid for writes.
 */
enum DeclipStatus declip_frame_bounds(const struct DeclipFrame *frame,
                                      double *lower,
                                      double *upper);

/**
 * Largest `|⟨x_i, x_j⟩|` over distinct unit vectors.
 *
 * # Safety
 * `frame` must be a live handle; `out` valid for a write.
 */
enum DeclipStatus declip_frame_coherence(const struct DeclipFrame *frame, double *out);

/**
 * Whether every `n` of the vectors span ℝⁿ.
 *
 * # Safety
 * `frame` must be a live handle; `out` valid for a write.
 */
enum DeclipStatus declip_frame_is_full_spark(const struct DeclipFrame *frame, bool *out);

/**
 * The Parseval frame `S^{-1/2}x_j`.
 *
 * # Safety
 * `frame` must be a live handle; `out` valid for a pointer write.
 */
enum DeclipStatus declip_frame_canonical_parseval(const struct DeclipFrame *frame,
                                                  struct DeclipFrame **out);

/**
 * Coefficients `⟨x, x_j⟩`; `x` has `n` entries, `out` receives `m`.
 *
 * # Safety
 * `frame` must be a live handle; buffers must match their lengths.
 */
enum DeclipStatus declip_frame_analysis(const struct DeclipFrame *frame,
                                        const double *x,
                                        size_t x_len,
                                        double *out,
                                        size_t out_len);

/**
 * `Σ c_j x_j`; `c` has `m` entries, `out` receives `n`.
 *
 * # Safety
 * `frame` must be a live handle; buffers must match their lengths.
 */
enum DeclipStatus declip_frame_synthesis(const struct DeclipFrame *frame,
                                         const double *c,
                                         size_t c_len,
                                         double *out,
                                         size_t out_len);

/**
 * Clamps each entry to `[-lambda, lambda]`; `out` receives `len` entries.
 *
 * # Safety
 * `c` and `out` must each hold `len` doubles.
 */
enum DeclipStatus declip_saturate(const double *c, size_t len, double lambda, double *out);

/**
 * Lower bound on the coherence of `m` unit vectors in ℝⁿ.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum DeclipStatus declip_welch_bound(size_t m, size_t n, double *out);

/**
 * Critical saturation level by one of the `DECLIP_LAMBDA_*` methods.
 *
 * `restarts` and `seed` are read by the estimator only.
 *
 * # Safety
 * `frame` must be a live handle; `out` valid for a write.
 */
enum DeclipStatus declip_lambda_c(const struct DeclipFrame *frame,
                                  int32_t method,
                                  size_t restarts,
                                  uint64_t seed,
                                  struct DeclipLambdaC *out);

/**
 * Linear frame algorithm on `frame` from `m` coefficients.
 *
 * `truth` is NULL or `n` entries; with it, errors are `‖x − y_k‖`.
 *
 * # Safety
 * `frame` must be a live handle; buffers must match their lengths; `out`
 * valid for a pointer write.
 */
enum DeclipStatus declip_recover_linear(const struct DeclipFrame *frame,
                                        const double *coeffs,
                                        size_t coeffs_len,
                                        double alpha,
                                        size_t iters,
                                        const double *truth,
                                        struct DeclipTrace **out);

/**
 * λ-saturated frame algorithm with constant coefficients `alpha`, `beta`.
 *
 * # Safety
 * As for [`declip_recover_linear`].
 */
enum DeclipStatus declip_recover_saturated(const struct DeclipFrame *frame,
                                           const double *coeffs,
                                           size_t coeffs_len,
                                           double lambda,
                                           double alpha,
                                           double beta,
                                           size_t iters,
                                           const double *truth,
                                           struct DeclipTrace **out);

/**
 * # Safety
 * `trace` must be NULL or a handle not yet freed.
 */
void declip_trace_free(struct DeclipTrace *trace);

/**
 * Number of iterations `K`; the trace holds `y_0, …, y_K`. 0 for NULL.
 *
 * # Safety
 * `trace` must be NULL or a live handle.
 */
size_t declip_trace_iterations(const struct DeclipTrace *trace);

/**
 * Iterate `y_k` for `0 ≤ k ≤ K` into `out` (`n` entries).
 *
 * # Safety
 * `trace` must be a live handle; `out` must hold `out_len` doubles.
 */
enum DeclipStatus declip_trace_iterate(const struct DeclipTrace *trace,
                                       size_t k,
                                       double *out,
                                       size_t out_len);

/**
 * Errors for `k = 0..=K` (`K + 1` entries): distance to the truth when it was
 * supplied, otherwise the residual.
 *
 * # Safety
 * `trace` must be a live handle; `out` must hold `out_len` doubles.
 */
enum DeclipStatus declip_trace_errors(const struct DeclipTrace *trace, double *out, size_t out_len);

/**
 * Residuals `‖Φ_λΘy_k − c‖` for `k = 0..=K`.
 *
 * # Safety
 * `trace` must be a live handle; `out` must hold `out_len` doubles.
 */
enum DeclipStatus declip_trace_residuals(const struct DeclipTrace *trace,
                                         double *out,
                                         size_t out_len);

/**
 * 10 × 30 frames, λ = 0.4, 1000 trials of 50 iterations, seed 42.
 */
struct DeclipExperimentConfig declip_experiment_default_config(void);

/**
 * Runs the Monte Carlo comparison on `threads` workers (0 = automatic).
 * The report does not depend on `threads`.
 *
 * # Safety
 * `config` must be readable; `out` valid for a pointer write.
 */
enum DeclipStatus declip_experiment_run(const struct DeclipExperimentConfig *config,
                                        size_t threads,
                                        bool keep_raw,
                                        struct DeclipReport **out);

/**
 * # Safety
 * `report` must be NULL or a handle not yet freed.
 */
void declip_report_free(struct DeclipReport *report);

/**
 * Iterations per series; 0 for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
size_t declip_report_iters(const struct DeclipReport *report);

/**
 * Total redraws of degenerate trials; 0 for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
uint64_t declip_report_redraws(const struct DeclipReport *report);

/**
 * Whether the mean nonlinear error never exceeds the mean linear error.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
bool declip_report_nonlinear_dominates(const struct DeclipReport *report);

/**
 * One of the `DECLIP_SERIES_*` series; entry `k − 1` is iteration `k`.
 *
 * # Safety
 * `report` must be a live handle; `out` must hold `out_len` doubles.
 */
enum DeclipStatus declip_report_series(const struct DeclipReport *report,
                                       int32_t series,
                                       double *out,
                                       size_t out_len);

/**
 * Writes `summary.csv`, `plot.dat` and, when kept, `raw.csv` into `dir`.
 *
 * # Safety
 * `report` must be a live handle; `dir` a NUL-terminated string.
 */
enum DeclipStatus declip_report_write(const struct DeclipReport *report, const char *dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DECLIP_H */
