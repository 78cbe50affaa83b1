#ifndef LOCCLAB_H
#define LOCCLAB_H

/* Generated by cbindgen from locclab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a fallible call. Mirrors the CLI exit-code contract.
 */
typedef enum LocclabStatus {
  /**
   * The call succeeded.
   */
  LOCCLAB_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  LOCCLAB_STATUS_NULL_ARGUMENT = 1,
  /**
   * Input text failed to parse.
   */
  LOCCLAB_STATUS_PARSE_ERROR = 2,
  /**
   * Inputs violated a precondition.
   */
  LOCCLAB_STATUS_PRECONDITION_ERROR = 3,
  /**
   * An internal invariant was breached (or a panic was caught).
   */
  LOCCLAB_STATUS_INTERNAL_ERROR = 4,
} LocclabStatus;

/**
 * Opaque handle to a labelled state ensemble.
 */
typedef struct LocclabEnsemble LocclabEnsemble;

/**
 * Opaque handle to a holism verdict report.
 */
typedef struct LocclabVerdict LocclabVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the most recent error message on this thread, or NULL if no
 * error has occurred. Free with `locclab_string_free`.
 */
char *locclab_last_error_message(void);

/**
 * Releases a string previously returned by this library.
 *
 * # Safety
 * `s` must have been returned by a locclab function and not freed yet.
 */
void locclab_string_free(char *s);

/**
 * The nine-product-state ensemble on 3x3.
 */
struct LocclabEnsemble *locclab_ensemble_domino(void);

/**
 * The Bell ensemble with `n` members (2 or 4); NULL on invalid `n`.
 */
struct LocclabEnsemble *locclab_ensemble_bell(uint32_t n);

/**
 * Parses ensemble-file text into a handle stored in `*out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum LocclabStatus locclab_ensemble_parse(const char *text, struct LocclabEnsemble **out);

/**
 * Releases an ensemble handle.
 *
 * # Safety
 * `ensemble` must come from this library and not be freed twice.
 */
void locclab_ensemble_free(struct LocclabEnsemble *ensemble);

/**
 * Number of members, or 0 for a NULL handle.
 *
 * # Safety
 * `ensemble` must be a live handle from this library (or NULL).
 */
uint32_t locclab_ensemble_member_count(const struct LocclabEnsemble *ensemble);

/**
 * Writes the party dimensions into `d_a` and `d_b`.
 *
 * # Safety
 * All pointers must be valid; `ensemble` must be a live handle.
 */
enum LocclabStatus locclab_ensemble_dims(const struct LocclabEnsemble *ensemble,
                                         uint32_t *d_a,
                                         uint32_t *d_b);

/**
 * Pairwise orthogonality census: writes whether all members are mutually
 * orthogonal and the largest overlap found.
 *
 * # Safety
 * All pointers must be valid; `ensemble` must be a live handle.
 */
enum LocclabStatus locclab_check_orthogonality(const struct LocclabEnsemble *ensemble,
                                               bool *orthogonal,
                                               double *max_overlap);

/**
 * Runs the full holism analysis (`samples` Haar draws per party scan
 * under `seed`) and stores the verdict handle in `*out`.
 *
 * # Safety
 * All pointers must be valid; `ensemble` must be a live handle.
 */
enum LocclabStatus locclab_holism_verdict(const struct LocclabEnsemble *ensemble,
                                          uint32_t samples,
                                          uint64_t seed,
                                          struct LocclabVerdict **out);

/**
 * Releases a verdict handle.
 *
 * # Safety
 * `verdict` must come from this library and not be freed twice.
 */
void locclab_verdict_free(struct LocclabVerdict *verdict);

/**
 * True when the verdict is "holism-evidence".
 *
 * # Safety
 * `verdict` must be a live handle (or NULL, which reads as false).
 */
bool locclab_verdict_is_holism_evidence(const struct LocclabVerdict *verdict);

/**
 * Success probability of the joint basis measurement.
 *
 * # Safety
 * `verdict` must be a live handle (or NULL, which reads as NaN).
 */
double locclab_verdict_global_success(const struct LocclabVerdict *verdict);

/**
 * Best success over the candidate-protocol library.
 *
 * # Safety
 * `verdict` must be a live handle (or NULL, which reads as NaN).
 */
double locclab_verdict_best_locc_success(const struct LocclabVerdict *verdict);

/**
 * Fraction of scanned bases that spoiled the ensemble (both parties).
 *
 * # Safety
 * `verdict` must be a live handle (or NULL, which reads as NaN).
 */
double locclab_verdict_spoil_fraction(const struct LocclabVerdict *verdict);

/**
 * Name of the best candidate protocol. Free with `locclab_string_free`.
 *
 * # Safety
 * `verdict` must be a live handle (or NULL, which yields NULL).
 */
char *locclab_verdict_best_protocol(const struct LocclabVerdict *verdict);

/**
 * The fixed evidence caveat. Free with `locclab_string_free`.
 *
 * # Safety
 * `verdict` must be a live handle (or NULL, which yields NULL).
 */
char *locclab_verdict_caveat(const struct LocclabVerdict *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOCCLAB_H */
