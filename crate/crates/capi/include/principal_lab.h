#ifndef PRINCIPAL_LAB_H
#define PRINCIPAL_LAB_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from the principal-lab-capi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum PlabStatus {
  // Success.
  PLAB_STATUS_OK = 0,
  // A required pointer argument was null.
  PLAB_STATUS_NULL_ARGUMENT = 1,
  // Arguments were structurally invalid (bad dimension, parameter out of
  // range, non-real coefficients, probe window too small, ...).
  PLAB_STATUS_INVALID_ARGUMENT = 2,
  // The quantity is not defined for this model family.
  PLAB_STATUS_UNSUPPORTED = 3,
  // A numerical routine failed internally.
  PLAB_STATUS_NUMERICAL = 4,
} PlabStatus;

// Which operator a one-variable probe polynomial is applied to.
typedef enum PlabAxis {
  // Apply the polynomial to Y; pairs -i[psi(Y), X] with Tr{psi'(Y) D2}.
  PLAB_AXIS_Y = 0,
  // Apply the polynomial to X; pairs -i[Y, psi(X)] with Tr{psi'(X) D2}.
  PLAB_AXIS_X = 1,
} PlabAxis;

// Opaque handle to a built operator model.
typedef struct PlabModel PlabModel;

// Structural health report of a built model.
typedef struct PlabHyponormality {
  // Smallest eigenvalue of the corner block of the self-commutator;
  // nonnegative up to rounding for a hyponormal truncation.
  double corner_selfcommutator_eigmin;
  // Largest deviation of -i[Y, X] from the stored defect operator away
  // from the truncation edge.
  double d2_max_deviation;
  // Smallest eigenvalue of X over the truncation.
  double x_min;
  // Largest eigenvalue of X over the truncation.
  double x_max;
  // Whether the X spectrum sits inside the stated interval.
  bool interval_contains_spectrum;
  // Stored Tr(D2) minus the recomputed diagonal sum, absolute.
  double tr_d2_error;
} PlabHyponormality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static NUL-terminated string.
const char *plab_version(void);

// Copies the last error message of the calling thread into `buffer`
// (NUL-terminated, truncated to `capacity`). Returns the full message
// length in bytes excluding the terminator; a zero return means no error
// has been recorded. Passing a null buffer or zero capacity just queries
// the length.
//
// # Safety
// `buffer` must be null or valid for writes of `capacity` bytes.
size_t plab_last_error_message(char *buffer, size_t capacity);

// Builds the unweighted shift model at the given truncation and corner
// sizes and stores the handle in `*out`.
//
// # Safety
// `out` must be valid for writes; the returned handle must be released
// with `plab_model_free`.
enum PlabStatus plab_model_shift(size_t ambient_dim, size_t corner_dim, struct PlabModel **out);

// Builds the elliptic model T = S + c e^{i phase} S* (0 < c < 1).
//
// # Safety
// `out` must be valid for writes; the returned handle must be released
// with `plab_model_free`.
enum PlabStatus plab_model_elliptic(double c,
                                    double phase,
                                    size_t ambient_dim,
                                    size_t corner_dim,
                                    struct PlabModel **out);

// Builds the q-weighted shift model with weights sqrt(1 - q^{j+1})
// (0 < q < 1).
//
// # Safety
// `out` must be valid for writes; the returned handle must be released
// with `plab_model_free`.
enum PlabStatus plab_model_q_weighted(double q,
                                      size_t ambient_dim,
                                      size_t corner_dim,
                                      struct PlabModel **out);

// Releases a model handle. Null is a no-op; a handle must not be used
// after it is freed.
//
// # Safety
// `model` must be null or a handle produced by a `plab_model_*`
// constructor that has not been freed yet.
void plab_model_free(struct PlabModel *model);

// Stores the truncation dimension in `*out`.
//
// # Safety
// `model` must be a live handle; `out` must be valid for writes.
enum PlabStatus plab_model_ambient_dim(const struct PlabModel *model, size_t *out);

// Stores the corner window size in `*out`.
//
// # Safety
// `model` must be a live handle; `out` must be valid for writes.
enum PlabStatus plab_model_corner_dim(const struct PlabModel *model, size_t *out);

// Stores the trace of the self-commutator defect D2 in `*out`.
//
// # Safety
// `model` must be a live handle; `out` must be valid for writes.
enum PlabStatus plab_model_tr_d2(const struct PlabModel *model, double *out);

// Stores the symmetric spectral interval [lo, hi] of X and Y.
//
// # Safety
// `model` must be a live handle; `lo` and `hi` must be valid for writes.
enum PlabStatus plab_model_interval(const struct PlabModel *model, double *lo, double *hi);

// Runs the structural hyponormality checks and stores the report.
//
// # Safety
// `model` must be a live handle; `out` must be valid for writes.
enum PlabStatus plab_model_verify(const struct PlabModel *model, struct PlabHyponormality *out);

// Computes the monomial moment mu(p, q) = corner trace pairing of
// t^p lambda^q against the principal-function data and stores it in `*out`.
//
// # Safety
// `model` must be a live handle; `out` must be valid for writes.
enum PlabStatus plab_moment(const struct PlabModel *model, size_t p, size_t q, double *out);

// Stores the closed-form area-integral moment for model families that have
// one; `PLAB_STATUS_UNSUPPORTED` otherwise.
//
// # Safety
// `model` must be a live handle; `out` must be valid for writes.
enum PlabStatus plab_expected_moment(const struct PlabModel *model,
                                     size_t p,
                                     size_t q,
                                     double *out);

// Evaluates the principal function via the symbol winding number at the
// point (u, v) and stores it in `*out`; unsupported for families without a
// closed symbol curve.
//
// # Safety
// `model` must be a live handle; `out` must be valid for writes.
enum PlabStatus plab_winding_r(const struct PlabModel *model, double u, double v, double *out);

// Checks the one-variable trace lemma for the real polynomial with the
// given ascending coefficients: corner trace of the commutator on `lhs`,
// defect-weighted derivative trace on `rhs`.
//
// # Safety
// `model` must be a live handle; `coeffs` must be null only when `len` is
// zero and otherwise valid for reads of `len` doubles; `lhs` and `rhs`
// must be valid for writes.
enum PlabStatus plab_lemma_check(const struct PlabModel *model,
                                 const double *coeffs,
                                 size_t len,
                                 enum PlabAxis axis,
                                 double *lhs,
                                 double *rhs);

// Smallest eigenvalue of the corner block of -i[psi(Y), X] for the real
// polynomial with the given ascending coefficients.
//
// # Safety
// `model` must be a live handle; `coeffs` must be null only when `len` is
// zero and otherwise valid for reads of `len` doubles; `out` must be valid
// for writes.
enum PlabStatus plab_positivity_probe(const struct PlabModel *model,
                                      const double *coeffs,
                                      size_t len,
                                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRINCIPAL_LAB_H */
