#ifndef TERAI_H
#define TERAI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TeraiStatus {
  TERAI_STATUS_OK = 0,
  TERAI_STATUS_NULL_POINTER = 1,
  TERAI_STATUS_INVALID_ARGUMENT = 2,
  TERAI_STATUS_PRECONDITION = 3,
  TERAI_STATUS_UTF8 = 4,
  TERAI_STATUS_INTERNAL = 5,
} TeraiStatus;

typedef enum TeraiVerdict {
  TERAI_VERDICT_THEOREM_CONSISTENT = 0,
  TERAI_VERDICT_VIOLATION = 1,
  TERAI_VERDICT_INCONCLUSIVE = 2,
} TeraiVerdict;

/**
 * Opaque instance handle.
 */
typedef struct TeraiInstance TeraiInstance;

/**
 * Opaque verification report handle.
 */
typedef struct TeraiReport TeraiReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the instance for `m > n > 0` given as decimal strings.
 *
 * # Safety
 * `m` and `n` must be NUL-terminated strings; `out` must be writable.
 */
enum TeraiStatus terai_instance_new(const char *m, const char *n, struct TeraiInstance **out);

/**
 * # Safety
 * `handle` must come from [`terai_instance_new`] or be null.
 */
void terai_instance_free(struct TeraiInstance *handle);

/**
 * Writes 1 to `out` when the instance meets every hypothesis, else 0.
 *
 * # Safety
 * `handle` must be a live instance handle; `out` must be writable.
 */
enum TeraiStatus terai_instance_qualifies(const struct TeraiInstance *handle, int32_t *out);

/**
 * Runs the verification pipeline with default bounds.
 *
 * # Safety
 * `handle` must be a live instance handle; `out` must be writable.
 */
enum TeraiStatus terai_verify(const struct TeraiInstance *handle, struct TeraiReport **out);

/**
 * # Safety
 * `report` must be a live report handle; `out` must be writable.
 */
enum TeraiStatus terai_report_verdict(const struct TeraiReport *report, enum TeraiVerdict *out);

/**
 * Canonical JSON for the report. Free the result with [`terai_string_free`].
 *
 * # Safety
 * `report` must be a live report handle; `out` must be writable.
 */
enum TeraiStatus terai_report_json(const struct TeraiReport *report, char **out);

/**
 * # Safety
 * `report` must come from [`terai_verify`] or be null.
 */
void terai_report_free(struct TeraiReport *report);

/**
 * Jacobi symbol `(a/n)` for decimal `a` (may be negative) and odd positive `n`.
 *
 * # Safety
 * `a` and `n` must be NUL-terminated strings; `out` must be writable.
 */
enum TeraiStatus terai_jacobi(const char *a, const char *n, int32_t *out);

/**
 * Solutions of `x^2 + b^y = c^z` as a JSON array of `[x, y, z]` strings.
 *
 * # Safety
 * `b` and `c` must be NUL-terminated strings; `out` must be writable.
 */
enum TeraiStatus terai_find_solutions_json(const char *b,
                                           const char *c,
                                           uint32_t y_max,
                                           uint32_t z_max,
                                           char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void terai_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *terai_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TERAI_H */
