#ifndef IDEALMOMENTS_H
#define IDEALMOMENTS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ImStatus {
  IM_STATUS_OK = 0,
  IM_STATUS_NULL_POINTER = 1,
  IM_STATUS_INVALID_UTF8 = 2,
  IM_STATUS_PARSE = 3,
  IM_STATUS_INVALID = 4,
  IM_STATUS_MISSING_OVERRIDE = 5,
  IM_STATUS_ASSUMPTION = 6,
  IM_STATUS_OVERFLOW = 7,
  IM_STATUS_BUFFER_TOO_SMALL = 8,
  IM_STATUS_PANIC = 9,
} ImStatus;

typedef enum ImDeltaMode {
  IM_DELTA_MODE_DIRECT = 0,
  IM_DELTA_MODE_DEDEKIND = 1,
} ImDeltaMode;

/**
 * A number field with its bad-prime overrides.
 */
typedef struct ImField ImField;

/**
 * A group preset with a chosen `N′`.
 */
typedef struct ImGroup ImGroup;

/**
 * Integers attached to a presentation and a choice of `N′`.
 */
typedef struct ImInvariants {
  /**
   * `|G|`
   */
  size_t n;
  size_t n_prime;
  size_t n_dprime;
  size_t h;
  /**
   * Common `|N″_h|`, or 0 when the sizes differ or `H` is trivial.
   */
  size_t n_h_dprime;
  bool normality_holds;
} ImInvariants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Owned by the
 * library; valid until the next failing call.
 */
const char *im_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void im_string_free(char *s);

/**
 * Builds a preset such as `"dihedral:4"` or `"a4"`; `n_prime` may be null
 * for the trivial subgroup.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum ImStatus im_group_new(const char *name, const char *n_prime, struct ImGroup **out);

/**
 * # Safety
 * `g` must be null or a handle from [`im_group_new`], freed once.
 */
void im_group_free(struct ImGroup *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum ImStatus im_group_invariants(const struct ImGroup *g, struct ImInvariants *out);

/**
 * `α(l)` and `β(l)`; `IM_STATUS_ASSUMPTION` when (I) or (III) fails.
 *
 * # Safety
 * `g` must be a live handle; `alpha` and `beta` writable.
 */
enum ImStatus im_group_alpha_beta(const struct ImGroup *g,
                                  uint32_t l,
                                  uint64_t *alpha,
                                  uint64_t *beta);

/**
 * `δ(l)` with default exponents as a reduced fraction.
 *
 * # Safety
 * `g` must be a live handle; `num` and `den` writable.
 */
enum ImStatus im_group_delta(const struct ImGroup *g,
                             uint32_t l,
                             enum ImDeltaMode mode,
                             int64_t *num,
                             int64_t *den);

/**
 * Full JSON group report for the exponents `ls[0..n]`. Free the result
 * with [`im_string_free`].
 *
 * # Safety
 * `g` must be a live handle, `ls` readable for `n` values, `out` writable.
 */
enum ImStatus im_group_report_json(const struct ImGroup *g,
                                   const uint32_t *ls,
                                   size_t n,
                                   char **out);

/**
 * Parses a monic irreducible polynomial. `overrides` is the override file
 * text, or null for the shipped overrides (none for unknown fields).
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` writable.
 */
enum ImStatus im_field_new(const char *poly, const char *overrides, struct ImField **out);

/**
 * # Safety
 * `f` must be null or a handle from [`im_field_new`], freed once.
 */
void im_field_free(struct ImField *f);

/**
 * # Safety
 * `f` must be a live handle and `degree` writable.
 */
enum ImStatus im_field_degree(const struct ImField *f, size_t *degree);

/**
 * Residue degrees of the primes above `p`, sorted. `len` receives the
 * count even when `cap` is too small.
 *
 * # Safety
 * `f` must be a live handle, `degrees` writable for `cap` values, `len`
 * and `ramified` writable.
 */
enum ImStatus im_field_splitting_type(const struct ImField *f,
                                      uint64_t p,
                                      uint32_t *degrees,
                                      size_t cap,
                                      size_t *len,
                                      bool *ramified);

/**
 * `S_l(X_j) = Σ_{m ≤ X_j} a(m)^l` at sorted checkpoints `xs[0..n]`, all at
 * most `x`.
 *
 * # Safety
 * `f` must be a live handle; `xs` readable and `sums` writable for `n` values.
 */
enum ImStatus im_field_moment_sums(const struct ImField *f,
                                   uint64_t x,
                                   uint32_t l,
                                   const uint64_t *xs,
                                   size_t n,
                                   uint64_t *sums);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IDEALMOMENTS_H */
