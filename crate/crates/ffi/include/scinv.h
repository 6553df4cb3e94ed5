#ifndef SCINV_H
#define SCINV_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ScinvRankMode {
  /*
   `max(m, n)·ε·σ₁` cutoff
   */
  SCINV_RANK_MODE_AUTO = 0,
  /*
   keep `rank` singular values
   */
  SCINV_RANK_MODE_FIXED = 1,
  /*
   cutoff at `threshold`
   */
  SCINV_RANK_MODE_THRESHOLD = 2,
} ScinvRankMode;

/*
 Outcome of a call. Anything but `Ok` leaves outputs untouched.
 */
typedef enum ScinvStatus {
  SCINV_STATUS_OK = 0,
  SCINV_STATUS_NULL_POINTER = 1,
  SCINV_STATUS_INVALID_ARGUMENT = 2,
  SCINV_STATUS_PARSE = 3,
  SCINV_STATUS_NOT_SQUARE = 4,
  SCINV_STATUS_SINGULAR = 5,
  SCINV_STATUS_IRRATIONAL_SPECTRUM = 6,
  SCINV_STATUS_CHAIN_FAILURE = 7,
  SCINV_STATUS_UNSUPPORTED = 8,
  /*
   A Rust panic was caught at the boundary.
   */
  SCINV_STATUS_INTERNAL = 9,
} ScinvStatus;

typedef enum ScinvKind {
  SCINV_KIND_MP = 0,
  SCINV_KIND_UC = 1,
  SCINV_KIND_DRAZIN = 2,
  SCINV_KIND_SC_JORDAN = 3,
  SCINV_KIND_SC_SYMMETRIC = 4,
} ScinvKind;

typedef enum ScinvBackend {
  /*
   Exact when the input is exact and the kind allows it, else float.
   */
  SCINV_BACKEND_AUTO = 0,
  SCINV_BACKEND_EXACT = 1,
  SCINV_BACKEND_FLOAT = 2,
} ScinvBackend;

/*
 Opaque matrix, exact rational or complex floating point.
 */
typedef struct ScinvMatrix ScinvMatrix;

/*
 Numerical options for the float backend. Non-positive tolerances select
 the defaults.
 */
typedef struct ScinvOptions {
  enum ScinvRankMode rank_mode;
  uintptr_t rank;
  double threshold;
  double cluster_tol;
  double rank_tol;
} ScinvOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the most recent failure on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *scinv_last_error_message(void);

void scinv_clear_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *scinv_version(void);

/*
 Default options: automatic rank cutoff and default Jordan tolerances.
 */
struct ScinvOptions scinv_options_default(void);

/*
 Builds a real floating matrix from `rows*cols` row-major doubles.

 # Safety
 `data` must point to `rows*cols` readable doubles; `out` must be writable.
 */
enum ScinvStatus scinv_matrix_from_real(uintptr_t rows,
                                        uintptr_t cols,
                                        const double *data,
                                        struct ScinvMatrix **out);

/*
 Builds a complex matrix from `2*rows*cols` doubles, row-major, each entry
 stored as `re, im`.

 # Safety
 `data` must point to `2*rows*cols` readable doubles; `out` must be writable.
 */
enum ScinvStatus scinv_matrix_from_complex(uintptr_t rows,
                                           uintptr_t cols,
                                           const double *data,
                                           struct ScinvMatrix **out);

/*
 Builds an exact matrix from `rows*cols` row-major integer numerators and
 denominators.

 # Safety
 `num` and `den` must each point to `rows*cols` readable values; `out` must
 be writable.
 */
enum ScinvStatus scinv_matrix_from_rationals(uintptr_t rows,
                                             uintptr_t cols,
                                             const int64_t *num,
                                             const int64_t *den,
                                             struct ScinvMatrix **out);

/*
 Parses the JSON matrix format (`{"rows", "cols", "data"}` with number,
 `"p/q"` or `[re, im]` entries).

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ScinvStatus scinv_matrix_from_json(const char *json, struct ScinvMatrix **out);

/*
 # Safety
 `m` must be null or a handle from this library that has not been freed.
 */
void scinv_matrix_free(struct ScinvMatrix *m);

/*
 # Safety
 `m` must be null or a live handle.
 */
uintptr_t scinv_matrix_rows(const struct ScinvMatrix *m);

/*
 # Safety
 `m` must be null or a live handle.
 */
uintptr_t scinv_matrix_cols(const struct ScinvMatrix *m);

/*
 # Safety
 `m` must be null or a live handle.
 */
bool scinv_matrix_is_exact(const struct ScinvMatrix *m);

/*
 Copies the entries as interleaved `re, im` doubles (exact entries are
 rounded). `len` is the capacity of `out` in doubles.

 # Safety
 `m` must be a live handle and `out` must point to `len` writable doubles.
 */
enum ScinvStatus scinv_matrix_copy_complex(const struct ScinvMatrix *m, double *out, uintptr_t len);

/*
 Copies the real parts. Fails with `Unsupported` if any imaginary part is
 nonzero.

 # Safety
 `m` must be a live handle and `out` must point to `len` writable doubles.
 */
enum ScinvStatus scinv_matrix_copy_real(const struct ScinvMatrix *m, double *out, uintptr_t len);

/*
 Serializes to the JSON matrix format (exact entries as `"p/q"`). The string
 must be released with `scinv_string_free`.

 # Safety
 `m` must be a live handle; `out` must be writable.
 */
enum ScinvStatus scinv_matrix_to_json(const struct ScinvMatrix *m, char **out);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void scinv_string_free(char *s);

/*
 Generalized inverse of `m`. `opts` may be NULL for defaults. On success
 `*out` receives a new handle the caller must free.

 # Safety
 `m` must be a live handle, `opts` null or readable, `out` writable.
 */
enum ScinvStatus scinv_inverse(const struct ScinvMatrix *m,
                               enum ScinvKind kind,
                               enum ScinvBackend backend,
                               const struct ScinvOptions *opts,
                               struct ScinvMatrix **out);

/*
 Relative gain array `M ∘ inv(M)ᵀ` for `Mp` or `Uc`.

 # Safety
 As for `scinv_inverse`.
 */
enum ScinvStatus scinv_rga(const struct ScinvMatrix *m,
                           enum ScinvKind kind,
                           struct ScinvMatrix **out);

/*
 `‖A·X·A − A‖_max` and `‖X·A·X − X‖_max`, evaluated in floating point.

 # Safety
 `a`, `x` must be live handles; `axiom1`, `axiom2` writable.
 */
enum ScinvStatus scinv_penrose_residuals(const struct ScinvMatrix *a,
                                         const struct ScinvMatrix *x,
                                         double *axiom1,
                                         double *axiom2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCINV_H */
