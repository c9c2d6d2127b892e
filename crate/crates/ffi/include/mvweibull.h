#ifndef MVWEIBULL_H
#define MVWEIBULL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum MvwStatus {
  MVW_STATUS_OK = 0,
  // An argument is outside the domain of the operation.
  MVW_STATUS_DOMAIN = 1,
  // A computation failed numerically.
  MVW_STATUS_NUMERIC = 2,
  // Malformed input.
  MVW_STATUS_PARSE = 3,
  // Input of the wrong shape or dimension.
  MVW_STATUS_SCHEMA = 4,
  // The information matrix is not positive definite.
  MVW_STATUS_NOT_POSITIVE_DEFINITE = 5,
  MVW_STATUS_IO = 6,
  // A required pointer argument was null.
  MVW_STATUS_NULL_POINTER = 7,
  // The requested value does not exist (for example standard errors of a
  // fit on the boundary).
  MVW_STATUS_UNAVAILABLE = 8,
  // An internal panic was caught at the boundary.
  MVW_STATUS_PANIC = 9,
} MvwStatus;

// Dataset under construction.
typedef struct MvwDataset MvwDataset;

// Outcome of a maximum likelihood fit.
typedef struct MvwFitResult MvwFitResult;

// Model parameters.
typedef struct MvwModel MvwModel;

// Seeded random stream.
typedef struct MvwRng MvwRng;

// Copy of the last error message on this thread, or null if there is none.
// Release with [`mvw_string_free`].
char *mvw_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void mvw_string_free(char *s);

// Creates a model of dimension `n` from `n` scales and `n` shapes.
//
// # Safety
// `scales` and `shapes` must point to `n` doubles; `out` must be writable.
enum MvwStatus mvw_model_new(double alpha,
                             const double *scales,
                             const double *shapes,
                             size_t n,
                             struct MvwModel **out);

// # Safety
// `model` must be null or a handle from [`mvw_model_new`] not yet freed.
void mvw_model_free(struct MvwModel *model);

// Dimension of the model, or 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
size_t mvw_model_dim(const struct MvwModel *model);

// Joint survival probability `P(X > x)`.
//
// # Safety
// `x` must point to `n` doubles and `out` must be writable.
enum MvwStatus mvw_survival(const struct MvwModel *model, const double *x, size_t n, double *out);

// Joint density at a point with positive coordinates.
//
// # Safety
// As for [`mvw_survival`].
enum MvwStatus mvw_pdf(const struct MvwModel *model, const double *x, size_t n, double *out);

// Log of the joint density.
//
// # Safety
// As for [`mvw_survival`].
enum MvwStatus mvw_log_pdf(const struct MvwModel *model, const double *x, size_t n, double *out);

// `(-1)^m` times the mixed partial derivative of the survival function in
// the `m` zero-based coordinates listed in `observed`.
//
// # Safety
// `x` must point to `n` doubles, `observed` to `m` indices, and `out` must
// be writable.
enum MvwStatus mvw_mixed_partial_survival(const struct MvwModel *model,
                                          const double *x,
                                          size_t n,
                                          const size_t *observed,
                                          size_t m,
                                          double *out);

// Product moment `E[x_1^e_1 ... x_n^e_n]`.
//
// # Safety
// `exponents` must point to `n` doubles and `out` must be writable.
enum MvwStatus mvw_moment(const struct MvwModel *model,
                          const double *exponents,
                          size_t n,
                          double *out);

// Correlation of coordinates `i` and `j` (zero-based).
//
// # Safety
// `out` must be writable.
enum MvwStatus mvw_correlation(const struct MvwModel *model, size_t i, size_t j, double *out);

// Creates the random stream identified by `(seed, stream)`.
//
// # Safety
// `out` must be writable.
enum MvwStatus mvw_rng_new(uint64_t seed, uint64_t stream, struct MvwRng **out);

// # Safety
// `rng` must be null or a live handle.
void mvw_rng_free(struct MvwRng *rng);

// Draws `count` points into `out`, row-major (`count * dim` doubles).
//
// # Safety
// `out` must point to `count * dim` writable doubles.
enum MvwStatus mvw_sample(const struct MvwModel *model,
                          struct MvwRng *rng,
                          size_t count,
                          double *out);

// Creates an empty dataset of dimension `dim`.
//
// # Safety
// `out` must be writable.
enum MvwStatus mvw_dataset_new(size_t dim, struct MvwDataset **out);

// The embedded rat tumor dataset (dimension 3, 50 records).
//
// # Safety
// `out` must be writable.
enum MvwStatus mvw_dataset_rats(struct MvwDataset **out);

// Appends one record: `dim` times and `dim` flags where nonzero marks a
// right-censored time.
//
// # Safety
// `times` and `censored` must point to `dim` elements.
enum MvwStatus mvw_dataset_push(struct MvwDataset *dataset,
                                const double *times,
                                const uint8_t *censored,
                                size_t dim);

// Number of records, or 0 for a null handle.
//
// # Safety
// `dataset` must be null or a live handle.
size_t mvw_dataset_len(const struct MvwDataset *dataset);

// # Safety
// `dataset` must be null or a live handle.
void mvw_dataset_free(struct MvwDataset *dataset);

// Maximum likelihood fit with default options. A result is produced even
// when the fit did not converge; inspect it with the accessors.
//
// # Safety
// `dataset` must be a live handle and `out` writable.
enum MvwStatus mvw_fit(const struct MvwDataset *dataset, struct MvwFitResult **out);

// # Safety
// `result` must be null or a live handle.
void mvw_fit_result_free(struct MvwFitResult *result);

// Length of the estimate vector `(alpha, scale_1, shape_1, ..)`: `2 dim + 1`.
//
// # Safety
// `result` must be null or a live handle.
size_t mvw_fit_result_estimate_count(const struct MvwFitResult *result);

// Writes `(alpha, scale_1, shape_1, ..)` into `out` (`len` doubles, at
// least [`mvw_fit_result_estimate_count`]).
//
// # Safety
// `out` must point to `len` writable doubles.
enum MvwStatus mvw_fit_result_estimates(const struct MvwFitResult *result, double *out, size_t len);

// Number of free parameters with a standard error: `2 dim + 1`, or 2 for
// one-dimensional data where alpha is fixed.
//
// # Safety
// `result` must be null or a live handle.
size_t mvw_fit_result_parameter_count(const struct MvwFitResult *result);

// Writes the standard errors of the free parameters, in the order of the
// estimates (alpha omitted for one-dimensional data). Returns
// `Unavailable` when they do not exist.
//
// # Safety
// `out` must point to `len` writable doubles.
enum MvwStatus mvw_fit_result_standard_errors(const struct MvwFitResult *result,
                                              double *out,
                                              size_t len);

// Maximized log-likelihood, or NaN for a null handle.
//
// # Safety
// `result` must be null or a live handle.
double mvw_fit_result_log_likelihood(const struct MvwFitResult *result);

// 1 if the optimizer converged, 0 otherwise (or for a null handle).
//
// # Safety
// `result` must be null or a live handle.
int32_t mvw_fit_result_converged(const struct MvwFitResult *result);

// The full result as a JSON document. Release with [`mvw_string_free`].
//
// # Safety
// `out` must be writable.
enum MvwStatus mvw_fit_result_to_json(const struct MvwFitResult *result, char **out);

#endif  /* MVWEIBULL_H */
