/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SPARSEREAL_H
#define SPARSEREAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum sr_status {
  SR_STATUS_OK = 0,
  // A required pointer argument was null.
  SR_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  SR_STATUS_INVALID_UTF8 = 2,
  // Text input did not parse.
  SR_STATUS_PARSE_ERROR = 3,
  // Input parsed but violates a precondition.
  SR_STATUS_INVALID_INPUT = 4,
  // The computation could not be completed or certified.
  SR_STATUS_SOLVER_ERROR = 5,
  // A result does not fit the requested output type.
  SR_STATUS_OVERFLOW = 6,
  // A panic was caught at the boundary.
  SR_STATUS_PANIC = 7,
} sr_status;

// An exponential sum `Σ c_i x^(a_i)` with rational exponents.
typedef struct sr_ksum sr_ksum;

// A polynomial system with equations and strict inequalities.
typedef struct sr_system sr_system;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next call into the library from the same thread.
const char *sr_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void sr_string_free(char *s);

// Library version as a static NUL-terminated string.
const char *sr_version(void);

// Reads a system from JSON `{"n": 2, "equations": [...], "inequalities": [...]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum sr_status sr_system_from_json(const char *json, struct sr_system **out);

// # Safety
// `sys` must come from [`sr_system_from_json`] and not have been freed.
void sr_system_free(struct sr_system *sys);

// Dimension `n` of the ambient space.
//
// # Safety
// `sys` must be a live handle.
size_t sr_system_dimension(const struct sr_system *sys);

// Full bound report as JSON.
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum sr_status sr_system_bound_report(const struct sr_system *sys, char **out);

// The polytope-volume component bound as a rational `p/q` string.
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum sr_status sr_system_volume_bound(const struct sr_system *sys, char **out);

// Parses a k-sum such as `"x^(7/3) - 3*x^0.5 - 1"`.
//
// # Safety
// `src` must be a NUL-terminated string; `out` must be writable.
enum sr_status sr_ksum_parse(const char *src, struct sr_ksum **out);

// # Safety
// `f` must come from [`sr_ksum_parse`] and not have been freed.
void sr_ksum_free(struct sr_ksum *f);

// Number of sign alternations, or `SIZE_MAX` for a null handle.
//
// # Safety
// `f` must be a live handle or null.
size_t sr_ksum_sign_alternations(const struct sr_ksum *f);

// Approximates the positive root in `(0, R]` of a k-sum with one sign
// alternation. `r` and `eps` are decimal or `p/q` strings; a zero
// `precision_bits` keeps the default. Writes the root as JSON, or `null`
// when there is no root in range.
//
// # Safety
// `f` must be a live handle; `r` and `eps` NUL-terminated; `out` writable.
enum sr_status sr_ksum_solve(const struct sr_ksum *f,
                             const char *r,
                             const char *eps,
                             uint32_t precision_bits,
                             char **out);

// Positive root of the binomial system given as JSON
// `{"D": [[...]], "c": [...], "R": ..., "epsilon": ...}`; writes the solution as JSON.
//
// # Safety
// `json` must be NUL-terminated; `out` writable.
enum sr_status sr_binomial_solve(const char *json, uint32_t precision_bits, char **out);

// Smith normal form of the row-major `n x n` matrix `entries`. Writes the
// `n` diagonal entries to `diagonal`, or fails with `Overflow` if one does
// not fit in 64 bits.
//
// # Safety
// `entries` must hold `n*n` values and `diagonal` room for `n`.
enum sr_status sr_smith_diagonal(const int64_t *entries, size_t n, int64_t *diagonal);

// Smith normal form with transforms `U`, `V` as JSON.
//
// # Safety
// `entries` must hold `n*n` values; `out` writable.
enum sr_status sr_smith_json(const int64_t *entries, size_t n, char **out);

// Normalized volume (`dim!` times Euclidean) of the convex hull of `count`
// integer points of dimension `dim`, stored row-major; written as `p/q`.
//
// # Safety
// `coords` must hold `count*dim` values; `out` writable.
enum sr_status sr_normalized_volume(const int64_t *coords, size_t count, size_t dim, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPARSEREAL_H */
