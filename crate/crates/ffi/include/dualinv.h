#ifndef DUALINV_H
#define DUALINV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum DgiStatus {
  /**
   * Success.
   */
  DgiStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  DgiStatus_NullPointer = 1,
  /**
   * An argument was out of domain: bad kind value, bad tolerance,
   * non-finite entries or an empty shape.
   */
  DgiStatus_InvalidArgument = 2,
  /**
   * Matrix shapes do not conform, or a square matrix was required.
   */
  DgiStatus_ShapeMismatch = 3,
  /**
   * The requested inverse does not exist for this input.
   */
  DgiStatus_NotExist = 4,
  /**
   * The input is not symmetric where symmetry is required.
   */
  DgiStatus_NotSymmetric = 5,
  /**
   * Existence characterizations disagreed near a rank boundary.
   */
  DgiStatus_Inconsistent = 6,
  /**
   * An internal cross-check failed or a panic was caught.
   */
  DgiStatus_Internal = 7,
} DgiStatus;

/**
 * Inverse selector values for the `kind` parameter.
 */
typedef enum DgiKind {
  DgiKind_Mpdgi = 0,
  DgiKind_Dmpgi = 1,
  DgiKind_Dggi = 2,
  DgiKind_Dcgi = 3,
} DgiKind;

/**
 * Opaque dual matrix handle.
 */
typedef struct DgiMatrix DgiMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a dual matrix from row-major entry buffers of `rows * cols`
 * doubles each. `dual` may be null for a zero dual part.
 *
 * # Safety
 *
 * `real` (and `dual` when non-null) must point to `rows * cols` readable
 * doubles; `out` must be a valid pointer to a handle slot.
 */
enum DgiStatus dgi_matrix_new(size_t rows,
                              size_t cols,
                              const double *real,
                              const double *dual,
                              struct DgiMatrix **out);

/**
 * Releases a handle created by this library. Null is ignored.
 *
 * # Safety
 *
 * `m` must be null or a handle previously returned by this library that
 * has not been freed yet.
 */
void dgi_matrix_free(struct DgiMatrix *m);

/**
 * Number of rows; 0 when the handle is null.
 *
 * # Safety
 *
 * `m` must be null or a live handle.
 */
size_t dgi_matrix_rows(const struct DgiMatrix *m);

/**
 * Number of columns; 0 when the handle is null.
 *
 * # Safety
 *
 * `m` must be null or a live handle.
 */
size_t dgi_matrix_cols(const struct DgiMatrix *m);

/**
 * Copies the matrix out in row-major order. Either destination may be
 * null to skip that part; non-null destinations need `rows * cols` slots.
 *
 * # Safety
 *
 * `m` must be a live handle; non-null destinations must point to
 * `rows * cols` writable doubles.
 */
enum DgiStatus dgi_matrix_copy(const struct DgiMatrix *m, double *real_out, double *dual_out);

/**
 * Computes the requested generalized inverse. `kind` takes a `DgiKind`
 * value; `rank_tol <= 0` selects the default tolerance and `eq_tol <= 0`
 * derives it as `100 * rank_tol`.
 *
 * # Safety
 *
 * `m` must be a live handle and `out` a valid pointer to a handle slot.
 */
enum DgiStatus dgi_inverse(const struct DgiMatrix *m,
                           int kind,
                           double rank_tol,
                           double eq_tol,
                           struct DgiMatrix **out);

/**
 * Writes 1 to `out` when the square dual matrix has dual index one (its
 * dual group and dual core inverses exist), 0 otherwise.
 *
 * # Safety
 *
 * `m` must be a live handle and `out` a valid pointer to an int slot.
 */
enum DgiStatus dgi_dual_index_is_one(const struct DgiMatrix *m,
                                     double rank_tol,
                                     double eq_tol,
                                     int *out);

/**
 * Solves `Ah x = b` for a square `Ah` and a one-column `b`. The particular
 * solution is written to `out_particular`; `out_projector` (the matrix
 * `I - G Ah`), `out_consistent` and `out_error_norm` may each be null when
 * not wanted.
 *
 * # Safety
 *
 * `a` and `b` must be live handles; `out_particular` must be a valid
 * pointer to a handle slot; the optional out-pointers must be null or
 * valid.
 */
enum DgiStatus dgi_solve(const struct DgiMatrix *a,
                         const struct DgiMatrix *b,
                         int kind,
                         double rank_tol,
                         double eq_tol,
                         struct DgiMatrix **out_particular,
                         struct DgiMatrix **out_projector,
                         int *out_consistent,
                         double *out_error_norm);

/**
 * Static description of a status code; never null.
 */
const char *dgi_status_message(enum DgiStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DUALINV_H */
