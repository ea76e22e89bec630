/* Generated by cbindgen from crates/qsp-braid-ffi; do not edit. */

#ifndef QSP_BRAID_H
#define QSP_BRAID_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Per-check verdicts as reported by [`qspb_report_status`].
 */
typedef enum QspbCheckStatus {
  QSPB_CHECK_STATUS_PASS = 0,
  QSPB_CHECK_STATUS_FAIL = 1,
  QSPB_CHECK_STATUS_SKIPPED = 2,
  QSPB_CHECK_STATUS_RESOURCE_SKIP = 3,
} QspbCheckStatus;

/**
 * Result codes of the C API.
 */
typedef enum QspbStatus {
  QSPB_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  QSPB_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  QSPB_STATUS_INVALID_UTF8 = 2,
  /**
   * `(n, r)` violates `1 <= r <= ceil(n/2) - 1`.
   */
  QSPB_STATUS_INADMISSIBLE_DATUM = 3,
  /**
   * The expression did not parse.
   */
  QSPB_STATUS_PARSE_ERROR = 4,
  /**
   * The expression parsed but could not be evaluated.
   */
  QSPB_STATUS_EVAL_ERROR = 5,
  /**
   * Unknown suite or oracle name.
   */
  QSPB_STATUS_UNKNOWN_NAME = 6,
  /**
   * Index past the end of a report.
   */
  QSPB_STATUS_OUT_OF_RANGE = 7,
  /**
   * An internal error was caught at the boundary.
   */
  QSPB_STATUS_INTERNAL = 8,
} QspbStatus;

/**
 * A Satake datum together with a parameter family.
 */
typedef struct QspbContext QspbContext;

/**
 * A parsed expression.
 */
typedef struct QspbExpr QspbExpr;

/**
 * The reports of one verification run.
 */
typedef struct QspbReport QspbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or NULL.  The
 * pointer stays valid until the next call into the library.
 */
const char *qspb_last_error(void);

/**
 * Release a string returned by the library.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void qspb_string_free(char *s);

/**
 * Create a context for the datum `(n, r)`.  With `symmetric` the
 * parameters satisfy `c_r = c_tau(r)` (needed for `phi`); otherwise they
 * are generic.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum QspbStatus qspb_context_new(size_t n, size_t r, bool symmetric, struct QspbContext **out);

/**
 * # Safety
 * `ctx` must be NULL or a handle from [`qspb_context_new`], not yet freed.
 */
void qspb_context_free(struct QspbContext *ctx);

/**
 * Parse `src` against the context.  Maps such as `ct[i](…)` are applied
 * during parsing.
 *
 * # Safety
 * `ctx` must be a live context, `src` a NUL-terminated string and `out`
 * writable storage for one handle.
 */
enum QspbStatus qspb_parse(const struct QspbContext *ctx, const char *src, struct QspbExpr **out);

/**
 * # Safety
 * `e` must be NULL or a handle from [`qspb_parse`], not yet freed.
 */
void qspb_expr_free(struct QspbExpr *e);

/**
 * Render the expression tree in the input grammar.  Returns NULL if `e`
 * is NULL.
 *
 * # Safety
 * `e` must be NULL or a live expression handle.
 */
char *qspb_expr_render(const struct QspbExpr *e);

/**
 * Evaluate to PBW normal form and return its rendering in `*out`.
 *
 * # Safety
 * `ctx` and `e` must be live handles, `out` writable.
 */
enum QspbStatus qspb_expr_normal_form(const struct QspbContext *ctx,
                                      const struct QspbExpr *e,
                                      char **out);

/**
 * Decide whether the expression is zero in U_q.
 *
 * # Safety
 * `ctx` and `e` must be live handles, `out` writable.
 */
enum QspbStatus qspb_expr_is_zero(const struct QspbContext *ctx,
                                  const struct QspbExpr *e,
                                  bool *out);

/**
 * Run a suite (`"all"` for every suite) with the given oracle
 * (`"pbw"`, `"elim"`, `"rep"` or `"all"`) on the context's datum.
 * `jobs = 0` uses one worker per core.
 *
 * # Safety
 * `ctx` must be live, `suite` and `oracle` NUL-terminated, `out` writable.
 */
enum QspbStatus qspb_verify(const struct QspbContext *ctx,
                            const char *suite,
                            const char *oracle,
                            size_t jobs,
                            struct QspbReport **out);

/**
 * # Safety
 * `rep` must be NULL or a handle from [`qspb_verify`], not yet freed.
 */
void qspb_report_free(struct QspbReport *rep);

/**
 * Number of checks in the report (0 for NULL).
 *
 * # Safety
 * `rep` must be NULL or a live report handle.
 */
size_t qspb_report_len(const struct QspbReport *rep);

/**
 * Number of failed checks (0 for NULL).
 *
 * # Safety
 * `rep` must be NULL or a live report handle.
 */
size_t qspb_report_failures(const struct QspbReport *rep);

/**
 * Verdict of check `index`.
 *
 * # Safety
 * `rep` must be a live report handle, `out` writable.
 */
enum QspbStatus qspb_report_status(const struct QspbReport *rep,
                                   size_t index,
                                   enum QspbCheckStatus *out);

/**
 * Check `index` as one JSON object (the same line `qspb verify` prints).
 *
 * # Safety
 * `rep` must be a live report handle, `out` writable.
 */
enum QspbStatus qspb_report_json(const struct QspbReport *rep, size_t index, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSP_BRAID_H */
