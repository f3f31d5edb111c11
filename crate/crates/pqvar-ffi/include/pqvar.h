#ifndef PQVAR_H
#define PQVAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Opaque handle to a validated model plus its exactness attestation.
 */
typedef struct PqvarModel PqvarModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Exit-style code of the most recent failure on this thread:
 * 0 none, 2 usage or configuration, 3 validation, 4 internal.
 */
int pqvar_last_error_code(void);

/**
 * Message of the most recent failure on this thread, or null when none.
 * The caller owns the returned string; release it with `pqvar_string_free`.
 */
char *pqvar_last_error_message(void);

/**
 * Release a string returned by any function of this library.
 * Passing null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library that has not
 * been freed before.
 */
void pqvar_string_free(char *s);

/**
 * Load and fully validate a model configuration file (TOML).  Returns an
 * opaque handle, or null with the error slot set.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string.
 */
struct PqvarModel *pqvar_model_load(const char *path);

/**
 * Release a model handle.  Passing null is a no-op.
 *
 * # Safety
 * `handle` must be null or a pointer obtained from `pqvar_model_load`
 * that has not been freed before.
 */
void pqvar_model_free(struct PqvarModel *handle);

/**
 * Hodge invariants, numerical Calabi-Yau test, and self-intersections of
 * the model, as a JSON document.
 *
 * # Safety
 * `handle` must be a live pointer from `pqvar_model_load`.
 */
char *pqvar_model_invariants_json(const struct PqvarModel *handle);

/**
 * Singular locus of the model by canonical type and stabilizer orbit,
 * as a JSON document.
 *
 * # Safety
 * `handle` must be a live pointer from `pqvar_model_load`.
 */
char *pqvar_model_singular_locus_json(const struct PqvarModel *handle);

/**
 * Invariant monomial plurigenus bounds for degrees `d_from..=d_to`,
 * as a JSON document.
 *
 * # Safety
 * `handle` must be a live pointer from `pqvar_model_load`.
 */
char *pqvar_model_plurigenus_json(const struct PqvarModel *handle, uint32_t d_from, uint32_t d_to);

/**
 * Calabi-Yau verdict from the plurigenus counts up to `d_max`,
 * as a JSON document.
 *
 * # Safety
 * `handle` must be a live pointer from `pqvar_model_load`.
 */
char *pqvar_model_verdict_json(const struct PqvarModel *handle, uint32_t d_max);

/**
 * Canonical volume and minimality of a two-factor model, as a JSON
 * document.  With `check_p3` the identity (P3 - P2)/2 = volume is also
 * verified.
 *
 * # Safety
 * `handle` must be a live pointer from `pqvar_model_load`.
 */
char *pqvar_model_surface_report_json(const struct PqvarModel *handle, bool check_p3);

/**
 * Stalk ideal of the cyclic quotient singularity 1/m(w_1..w_n) at
 * pluricanonical degree `k`, as a JSON document.
 *
 * # Safety
 * `weights` must point to `weight_count` readable u64 values.
 */
char *pqvar_ideal_json(uint64_t m, const uint64_t *weights, uintptr_t weight_count, uint32_t k);

/**
 * Admissible branching data for factor genera up to `g_max`, as a JSON
 * document.  A negative `r_exact` leaves the branch-point count free.
 */
char *pqvar_classify_json(uint64_t g_max, int64_t r_exact);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PQVAR_H */
