#ifndef HFL_H
#define HFL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The nonzero hypothesis, budget and I/O codes match the exit
 * codes of the `hfl` binary.
 */
typedef enum HflStatus {
  HFL_STATUS_OK = 0,
  HFL_STATUS_NULL_ARGUMENT = 1,
  HFL_STATUS_HYPOTHESIS = 2,
  HFL_STATUS_BUDGET = 3,
  HFL_STATUS_IO = 4,
  HFL_STATUS_INVALID_UTF8 = 5,
  HFL_STATUS_PANIC = 6,
} HflStatus;

/**
 * A finite field `F_{p^k}`.
 */
typedef struct HflField HflField;

/**
 * A validated construction parameter set.
 */
typedef struct HflParams HflParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *hfl_last_error(void);

/**
 * Builds `F_{p^k}`. With `modulus_len = 0` the default defining polynomial
 * is used; otherwise `modulus` holds `k + 1` coefficients, low degree first.
 *
 * # Safety
 * `modulus` must point to `modulus_len` values; `out` must be writable.
 */
enum HflStatus hfl_field_new(uint64_t p,
                             uint32_t k,
                             const uint64_t *modulus,
                             size_t modulus_len,
                             struct HflField **out);

/**
 * Number of elements, or 0 for a NULL handle.
 *
 * # Safety
 * `field` must be NULL or a live handle.
 */
uint64_t hfl_field_order(const struct HflField *field);

/**
 * # Safety
 * `field` must be NULL or a handle from [`hfl_field_new`] not yet freed.
 */
void hfl_field_free(struct HflField *field);

/**
 * Parses and validates a parameter document as written by `hfl construct`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HflStatus hfl_params_from_json(const char *json, struct HflParams **out);

/**
 * Faithful positive-characteristic parameters; `betas` holds `k` residues.
 *
 * # Safety
 * `betas` must point to `betas_len` values; `out` must be writable.
 */
enum HflStatus hfl_params_charp(size_t n,
                                uint64_t p,
                                size_t k,
                                const uint64_t *betas,
                                size_t betas_len,
                                struct HflParams **out);

/**
 * Small-degree parameters with `q = p` (odd `p`) or `q = 2^l` (`p = 2`).
 *
 * # Safety
 * `out` must be writable.
 */
enum HflStatus hfl_params_surrogate(size_t n,
                                    uint64_t p,
                                    uint64_t t,
                                    uint32_t l,
                                    struct HflParams **out);

/**
 * Degree `m` of `g` in `T`, or 0 for a NULL handle.
 *
 * # Safety
 * `params` must be NULL or a live handle.
 */
uint64_t hfl_params_degree(const struct HflParams *params);

/**
 * Serializes parameters; release the string with [`hfl_string_free`].
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum HflStatus hfl_params_to_json(const struct HflParams *params, char **out);

/**
 * # Safety
 * `params` must be NULL or a handle not yet freed.
 */
void hfl_params_free(struct HflParams *params);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void hfl_string_free(char *s);

/**
 * Evaluates the relation on `len` distinct points. The characteristic of
 * `field` must match the parameters unless `allow_foreign_char` is set.
 *
 * # Safety
 * Handles must be live; `points` must hold `len` values; the output
 * pointers must be writable (`degenerate` may be NULL).
 */
enum HflStatus hfl_relation(const struct HflParams *params,
                            const struct HflField *field,
                            const uint64_t *points,
                            size_t len,
                            bool allow_foreign_char,
                            bool *in_r,
                            bool *degenerate);

/**
 * Number of distinct roots in the field of the polynomial with `len`
 * coefficients (low degree first).
 *
 * # Safety
 * `field` must be live; `coeffs` must hold `len` values; `out` writable.
 */
enum HflStatus hfl_count_roots(const struct HflField *field,
                               const uint64_t *coeffs,
                               size_t len,
                               size_t *out);

/**
 * Exhaustive check that `S(a, X)` determines every `(n−1)`-subset `a`.
 *
 * # Safety
 * `field` must be live; `injective` and `subsets` must be writable.
 */
enum HflStatus hfl_symcheck(const struct HflField *field,
                            size_t n,
                            bool *injective,
                            uint64_t *subsets);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HFL_H */
