#ifndef FOURIER_JACOBI_H
#define FOURIER_JACOBI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum FjStatus {
  FJ_STATUS_OK = 0,
  FJ_STATUS_NULL_POINTER = 1,
  FJ_STATUS_PARSE = 2,
  FJ_STATUS_INVALID_ARGUMENT = 3,
  FJ_STATUS_NOT_CUSPIDAL = 4,
  FJ_STATUS_HYPOTHESIS = 5,
  FJ_STATUS_NOT_POSITIVE_DEFINITE = 6,
  FJ_STATUS_OUT_OF_PRECISION = 7,
  FJ_STATUS_EMPTY_CUSP_SPACE = 8,
  FJ_STATUS_INTERNAL = 99,
} FjStatus;

/**
 * Opaque handle to a formal Fourier-Jacobi series.
 */
typedef struct FjSeries FjSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread. Valid until the
 * next failing call on the same thread; never null.
 */
const char *fj_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void fj_string_free(char *s);

/**
 * Lifts the first cusp form of weight `k` and index one to slices
 * `m <= m_max`, each known below `q1^prec`.
 *
 * # Safety
 * `out` points to writable storage for one handle.
 */
enum FjStatus fj_series_lift(int64_t k, uint64_t m_max, uint64_t prec, struct FjSeries **out);

/**
 * Reads a series from its JSON text.
 *
 * # Safety
 * `json` is a nul-terminated string; `out` points to writable storage.
 */
enum FjStatus fj_series_from_json(const char *json, struct FjSeries **out);

/**
 * Writes the JSON text of a series to `*out`; free it with
 * [`fj_string_free`].
 *
 * # Safety
 * `s` is a live handle; `out` points to writable storage.
 */
enum FjStatus fj_series_to_json(const struct FjSeries *s, char **out);

/**
 * # Safety
 * `s` is null or a handle from this library, not yet freed.
 */
void fj_series_free(struct FjSeries *s);

/**
 * Weight, `M_max` and `q1` precision of a series. Any output pointer may
 * be null.
 *
 * # Safety
 * `s` is a live handle; non-null outputs are writable.
 */
enum FjStatus fj_series_shape(const struct FjSeries *s,
                              int64_t *weight,
                              uint64_t *m_max,
                              uint64_t *prec,
                              bool *cuspidal);

/**
 * The coefficient `c(n, r, m)` as text `p/q` (or `p`).
 *
 * # Safety
 * `s` is a live handle; `out` points to writable storage.
 */
enum FjStatus fj_series_coeff(const struct FjSeries *s,
                              int64_t n,
                              int64_t r,
                              int64_t m,
                              char **out);

/**
 * Number of symmetry violations among the coefficients with
 * `n, m <= bound`.
 *
 * # Safety
 * `s` is a live handle; `violations` points to writable storage.
 */
enum FjStatus fj_series_check_symmetry(const struct FjSeries *s,
                                       uint64_t bound,
                                       size_t *violations);

/**
 * Pointwise convergence check at the torsion point `z = tau1 a/N + b/N`
 * on `|q2| = theta exp(-2 pi C)`, comparing `S_M` with `S_2M`. Writes the
 * report as JSON to `*report` and the verdict to `*passed`.
 *
 * # Safety
 * `s` is a live handle; `passed` and `report` point to writable storage.
 */
enum FjStatus fj_certify_pointwise(const struct FjSeries *s,
                                   uint64_t level,
                                   int64_t a,
                                   int64_t b,
                                   double tau1_re,
                                   double tau1_im,
                                   double theta,
                                   uint64_t m,
                                   bool *passed,
                                   char **report);

/**
 * Minkowski-reduces `"a,b;b,c"`; writes
 * `{"reduced": ..., "transform": ...}` to `*out`.
 *
 * # Safety
 * `matrix` is a nul-terminated string; `out` points to writable storage.
 */
enum FjStatus fj_reduce(const char *matrix, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOURIER_JACOBI_H */
