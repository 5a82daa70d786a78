#ifndef KAHYP_H
#define KAHYP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KahypVariant {
  KAHYP_VARIANT_T0 = 0,
  KAHYP_VARIANT_TH = 1,
} KahypVariant;

typedef enum KahypStatus {
  KAHYP_STATUS_OK = 0,
  KAHYP_STATUS_NULL_ARGUMENT = 1,
  KAHYP_STATUS_INVALID_UTF8 = 2,
  KAHYP_STATUS_SYNTAX = 3,
  KAHYP_STATUS_INVALID_CONFIG = 4,
  KAHYP_STATUS_BUDGET_EXCEEDED = 5,
  KAHYP_STATUS_INTERNAL = 6,
} KahypStatus;

typedef enum KahypVerdict {
  KAHYP_VERDICT_EQUIVALENT = 0,
  /**
   * The witness is in the left language only.
   */
  KAHYP_VERDICT_INEQUIVALENT_LEFT = 1,
  /**
   * The witness is in the right language only.
   */
  KAHYP_VERDICT_INEQUIVALENT_RIGHT = 2,
  KAHYP_VERDICT_UNKNOWN = 3,
} KahypVerdict;

/**
 * A parsed regular expression.
 */
typedef struct KahypExpr KahypExpr;

/**
 * A list of hypotheses.
 */
typedef struct KahypHypotheses KahypHypotheses;

/**
 * The result of a reduction, defined or not.
 */
typedef struct KahypReduction KahypReduction;

/**
 * Closure settings. Start from [`kahyp_config_default`].
 */
typedef struct KahypConfig {
  enum KahypVariant variant;
  uint32_t max_rounds;
  size_t max_states;
} KahypConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on this thread.
 */
const char *kahyp_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void kahyp_string_free(char *s);

struct KahypConfig kahyp_config_default(void);

/**
 * # Safety
 * `src` must be a nul-terminated string and `out` writable.
 */
enum KahypStatus kahyp_expr_parse(const char *src, struct KahypExpr **out_expr);

/**
 * # Safety
 * `e` must be null or a live handle from this library.
 */
void kahyp_expr_free(struct KahypExpr *e);

/**
 * The expression in concrete syntax, or null if `e` is null.
 *
 * # Safety
 * `e` must be null or a live handle.
 */
char *kahyp_expr_to_string(const struct KahypExpr *e);

/**
 * Parses hypotheses in the file format: one per line, `#` starting a
 * comment. A line `u == w` contributes two hypotheses.
 *
 * # Safety
 * `src` must be a nul-terminated string and `out_hyps` writable.
 */
enum KahypStatus kahyp_hypotheses_parse(const char *src, struct KahypHypotheses **out_hyps);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
size_t kahyp_hypotheses_len(const struct KahypHypotheses *h);

/**
 * # Safety
 * `h` must be null or a live handle.
 */
void kahyp_hypotheses_free(struct KahypHypotheses *h);

/**
 * Reduces `e` under `hyps`. An undefined reduction is still `KAHYP_STATUS_OK`;
 * inspect it with [`kahyp_reduction_is_reduced`]. A null `cfg` means the
 * defaults.
 *
 * # Safety
 * Handles must be live, `cfg` null or readable, `out_red` writable.
 */
enum KahypStatus kahyp_reduce(const struct KahypExpr *e,
                              const struct KahypHypotheses *hyps,
                              const struct KahypConfig *cfg,
                              struct KahypReduction **out_red);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
bool kahyp_reduction_is_reduced(const struct KahypReduction *r);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
uint32_t kahyp_reduction_rounds(const struct KahypReduction *r);

/**
 * A new handle for the reduced expression, or null if undefined.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
struct KahypExpr *kahyp_reduction_expr(const struct KahypReduction *r);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
void kahyp_reduction_free(struct KahypReduction *r);

/**
 * Decides `left ≡ right` under `hyps`. For an inequivalence the witness is
 * stored in `out_witness` (if not null); otherwise `*out_witness` is null.
 *
 * # Safety
 * Handles must be live, `cfg` null or readable, `out_verdict` writable,
 * `out_witness` null or writable.
 */
enum KahypStatus kahyp_equiv(const struct KahypExpr *left,
                             const struct KahypExpr *right,
                             const struct KahypHypotheses *hyps,
                             const struct KahypConfig *cfg,
                             enum KahypVerdict *out_verdict,
                             char **out_witness);

/**
 * The full decision as JSON, in the same shape as `kahyp equiv --format json`.
 *
 * # Safety
 * As for [`kahyp_equiv`]; `out_json` must be writable.
 */
enum KahypStatus kahyp_equiv_json(const struct KahypExpr *left,
                                  const struct KahypExpr *right,
                                  const struct KahypHypotheses *hyps,
                                  const struct KahypConfig *cfg,
                                  char **out_json);

/**
 * The words of length at most `len` in the bounded hypothesis closure of
 * `e`, as a JSON object `{words, len, slack, stabilized}`.
 *
 * # Safety
 * Handles must be live, `out_json` writable.
 */
enum KahypStatus kahyp_closure_sample_json(const struct KahypExpr *e,
                                           const struct KahypHypotheses *hyps,
                                           size_t len,
                                           size_t slack,
                                           char **out_json);

/**
 * The Thompson automaton of `e` in Graphviz syntax, or null if `e` is null.
 *
 * # Safety
 * `e` must be null or a live handle.
 */
char *kahyp_thompson_dot(const struct KahypExpr *e);

/**
 * The Thompson automaton of `e` as JSON, or null if `e` is null.
 *
 * # Safety
 * `e` must be null or a live handle.
 */
char *kahyp_thompson_json(const struct KahypExpr *e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KAHYP_H */
