#ifndef RFGROWTH_H
#define RFGROWTH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RfgStatus {
  RFG_STATUS_OK = 0,
  RFG_STATUS_NULL_POINTER = 1,
  RFG_STATUS_INVALID_ARGUMENT = 2,
  RFG_STATUS_INVALID_WORD = 3,
  RFG_STATUS_SEQUENCE_ERROR = 4,
  RFG_STATUS_GROUP_ERROR = 5,
  RFG_STATUS_PANIC = 6,
} RfgStatus;

/**
 * Opaque handle to a group together with its parameter sequences.
 */
typedef struct RfgContext RfgContext;

/**
 * One row of the parameter sequences.
 */
typedef struct RfgSequenceRow {
  uint64_t n;
  uint64_t f;
  uint64_t d;
  uint64_t q;
  uint64_t r;
  /**
   * All side conditions hold at this index.
   */
  bool certified;
} RfgSequenceRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The toy profile `f(n) = 16n + 1`, `q(n) = n`.
 */
struct RfgContext *rfg_context_new_toy(void);

/**
 * The builtin profile `log F(n) = c·n·(ln n)²·(ln ln n)^{1+eps}`; null if
 * `c` or `eps` is not positive and finite.
 */
struct RfgContext *rfg_context_new_builtin(double c, double eps);

/**
 * # Safety
 * `ctx` is null or a handle from `rfg_context_new_*` not yet freed.
 */
void rfg_context_free(struct RfgContext *ctx);

/**
 * The last error message on this thread, or null. Owned by the library.
 */
const char *rfg_last_error(void);

/**
 * # Safety
 * `ctx` is a live handle and `out` is valid for writes.
 */
enum RfgStatus rfg_sequence_row(const struct RfgContext *ctx,
                                uint64_t n,
                                struct RfgSequenceRow *out);

/**
 * Whether the word (over `a A b B`) is trivial in the group.
 *
 * # Safety
 * `ctx` is a live handle, `w` a NUL-terminated string, `out` writable.
 */
enum RfgStatus rfg_is_trivial(const struct RfgContext *ctx, const char *w, bool *out);

/**
 * # Safety
 * As for `rfg_is_trivial`, with two words.
 */
enum RfgStatus rfg_words_equal(const struct RfgContext *ctx,
                               const char *u,
                               const char *v,
                               bool *out);

/**
 * The checked witness word for coordinate `m`, as a new string to be
 * released with `rfg_string_free`.
 *
 * # Safety
 * `ctx` is a live handle and `out` writable.
 */
enum RfgStatus rfg_witness(const struct RfgContext *ctx, uint64_t m, char **out);

/**
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void rfg_string_free(char *s);

/**
 * Whether `α = (0 … d-1)` and `β = (0, r1, r1+r2)` generate `Alt(d)`.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum RfgStatus rfg_verify_alt_generation(uint64_t d, uint64_t r1, uint64_t r2, bool *out);

bool rfg_is_prime(uint64_t n);

/**
 * `ln n!`.
 */
double rfg_log_factorial(uint64_t n);

/**
 * `ln(d(n)!/2)`, the upper bound on the residual finiteness growth at `n`.
 *
 * # Safety
 * `ctx` is a live handle and `out` writable.
 */
enum RfgStatus rfg_rf_upper(const struct RfgContext *ctx, uint64_t n, double *out);

/**
 * `Σ_{k ≤ 2n} ln d(k)! - 2n ln 2`, the upper bound on the full growth at `n`.
 *
 * # Safety
 * `ctx` is a live handle and `out` writable.
 */
enum RfgStatus rfg_full_rf_upper(const struct RfgContext *ctx, uint64_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RFGROWTH_H */
