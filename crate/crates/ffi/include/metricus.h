#ifndef METRICUS_H
#define METRICUS_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Skip validation before computing.
 */
#define METRICUS_NO_VALIDATE 1

/**
 * Validation warnings block the computation.
 */
#define METRICUS_STRICT 2

/**
 * Compute despite validation errors. Ignored with `METRICUS_STRICT`.
 */
#define METRICUS_ALLOW_ERRORS 4

typedef enum MetricusStatus {
  METRICUS_STATUS_OK = 0,
  METRICUS_STATUS_SHAPE_MISMATCH = 1,
  METRICUS_STATUS_EMPTY_INPUT = 2,
  METRICUS_STATUS_NON_FINITE_VALUE = 3,
  METRICUS_STATUS_DOMAIN_ERROR = 4,
  METRICUS_STATUS_DEGENERATE_INPUT = 5,
  METRICUS_STATUS_INVALID_PARAMETER = 6,
  METRICUS_STATUS_LABEL_ERROR = 7,
  METRICUS_STATUS_IO_ERROR = 8,
  /**
   * Validation reported blocking findings; no value was computed.
   */
  METRICUS_STATUS_VALIDATION_FAILED = 9,
  METRICUS_STATUS_NULL_POINTER = 10,
  METRICUS_STATUS_INVALID_UTF8 = 11,
  METRICUS_STATUS_BUFFER_TOO_SMALL = 12,
  METRICUS_STATUS_PANIC = 13,
} MetricusStatus;

typedef enum MetricusValueKind {
  METRICUS_VALUE_KIND_SCALAR = 0,
  METRICUS_VALUE_KIND_PER_CLASS = 1,
  METRICUS_VALUE_KIND_MATRIX = 2,
} MetricusValueKind;

typedef struct MetricusInputs MetricusInputs;

/**
 * Named parameters given as strings, parsed against the metric on use.
 */
typedef struct MetricusParams MetricusParams;

typedef struct MetricusReport MetricusReport;

typedef struct MetricusResult MetricusResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *metricus_version(void);

/**
 * Message of the last failure on this thread, or NULL. Valid until the next
 * metricus call on the same thread.
 */
const char *metricus_last_error(void);

/**
 * # Safety
 * `s` must come from a metricus `char **` output and not have been freed.
 */
void metricus_string_free(char *s);

/**
 * JSON array of metric descriptors, optionally for one task (`task` may be
 * NULL).
 *
 * # Safety
 * `task` is NULL or a NUL-terminated string; `out` is writable.
 */
enum MetricusStatus metricus_list_metrics_json(const char *task, char **out);

/**
 * JSON descriptor of one metric. Unknown names fail with `LabelError` and
 * near-match suggestions.
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is writable.
 */
enum MetricusStatus metricus_describe_metric_json(const char *name, char **out);

/**
 * JSON array of validation checks with their ids, severities and tasks.
 *
 * # Safety
 * `out` is writable.
 */
enum MetricusStatus metricus_check_catalog_json(char **out);

struct MetricusParams *metricus_params_new(void);

/**
 * Sets `key` to `value`, both as they would appear on the command line,
 * e.g. `"average"` and `"macro"`.
 *
 * # Safety
 * `params` comes from `metricus_params_new`; strings are NUL-terminated.
 */
enum MetricusStatus metricus_params_set(struct MetricusParams *params,
                                        const char *key,
                                        const char *value);

/**
 * # Safety
 * `params` is NULL or comes from `metricus_params_new` and was not freed.
 */
void metricus_params_free(struct MetricusParams *params);

/**
 * Regression inputs: two arrays of `n` doubles.
 *
 * # Safety
 * Each array holds `n` readable elements; `out` is writable.
 */
enum MetricusStatus metricus_inputs_regression(const double *y_true,
                                               const double *y_pred,
                                               size_t n,
                                               struct MetricusInputs **out);

/**
 * Classification inputs from hard label vectors of length `n`.
 *
 * # Safety
 * Each array holds `n` readable elements; `out` is writable.
 */
enum MetricusStatus metricus_inputs_classification(const int64_t *y_true,
                                                   const int64_t *y_pred,
                                                   size_t n,
                                                   struct MetricusInputs **out);

/**
 * Classification inputs from labels and a row-major `n` × `n_classes` score
 * matrix.
 *
 * # Safety
 * `y_true` holds `n` elements and `scores` `n * n_classes`; `out` is writable.
 */
enum MetricusStatus metricus_inputs_scores(const int64_t *y_true,
                                           const double *scores,
                                           size_t n,
                                           size_t n_classes,
                                           struct MetricusInputs **out);

/**
 * Two partitions of `n` points, for the external clustering indices.
 *
 * # Safety
 * Each array holds `n` readable elements; `out` is writable.
 */
enum MetricusStatus metricus_inputs_external(const int64_t *labels_true,
                                             const int64_t *labels_pred,
                                             size_t n,
                                             struct MetricusInputs **out);

/**
 * Row-major `n` × `dim` features with one cluster label per row, for the
 * internal clustering indices.
 *
 * # Safety
 * `x` holds `n * dim` elements and `labels` `n`; `out` is writable.
 */
enum MetricusStatus metricus_inputs_internal(const double *x,
                                             size_t n,
                                             size_t dim,
                                             const int64_t *labels,
                                             struct MetricusInputs **out);

/**
 * Two C-order masks of the same `shape` (rank 2 or 3). `spacing` may be
 * NULL, otherwise it holds `ndim` voxel sizes applied to both masks.
 *
 * # Safety
 * `shape` holds `ndim` elements and each mask their product; `out` is
 * writable.
 */
enum MetricusStatus metricus_inputs_segmentation(const int64_t *y_true,
                                                 const int64_t *y_pred,
                                                 const size_t *shape,
                                                 size_t ndim,
                                                 const double *spacing,
                                                 struct MetricusInputs **out);

/**
 * Two C-order floating-point images, H×W or H×W×C.
 *
 * # Safety
 * `shape` holds `ndim` elements and each image their product; `out` is
 * writable.
 */
enum MetricusStatus metricus_inputs_image_f64(const double *reference,
                                              const double *test,
                                              const size_t *shape,
                                              size_t ndim,
                                              struct MetricusInputs **out);

/**
 * Two C-order 8-bit images; the data range defaults to 255.
 *
 * # Safety
 * `shape` holds `ndim` elements and each image their product; `out` is
 * writable.
 */
enum MetricusStatus metricus_inputs_image_u8(const uint8_t *reference,
                                             const uint8_t *test,
                                             const size_t *shape,
                                             size_t ndim,
                                             struct MetricusInputs **out);

/**
 * # Safety
 * `inputs` is NULL or an undisposed handle from a `metricus_inputs_*` call.
 */
void metricus_inputs_free(struct MetricusInputs *inputs);

/**
 * Validates and computes `metric`. `params` may be NULL. `flags` combines
 * `METRICUS_NO_VALIDATE`, `METRICUS_STRICT` and `METRICUS_ALLOW_ERRORS`.
 * When validation blocks, the status is `ValidationFailed` and the last
 * error carries the report as JSON.
 *
 * # Safety
 * Handles are live; `metric` is NUL-terminated; `out` is writable.
 */
enum MetricusStatus metricus_evaluate(const char *metric,
                                      const struct MetricusInputs *inputs,
                                      const struct MetricusParams *params,
                                      uint32_t flags,
                                      struct MetricusResult **out);

/**
 * Runs every validator for the inputs' task. `metric` (may be NULL) selects
 * metric-specific rules; `checks` (may be NULL) is a comma-separated list of
 * check ids to enable.
 *
 * # Safety
 * `inputs` is live; strings are NULL or NUL-terminated; `out` is writable.
 */
enum MetricusStatus metricus_validate(const struct MetricusInputs *inputs,
                                      const char *metric,
                                      const char *checks,
                                      uint64_t seed,
                                      struct MetricusReport **out);

/**
 * # Safety
 * `result` is a live handle from `metricus_evaluate`.
 */
enum MetricusValueKind metricus_result_kind(const struct MetricusResult *result);

/**
 * # Safety
 * `result` is a live handle; `out` is writable.
 */
enum MetricusStatus metricus_result_scalar(const struct MetricusResult *result, double *out);

/**
 * Number of entries in a per-class value, or cells in a matrix value; 1 for
 * scalars.
 *
 * # Safety
 * `result` is NULL or a live handle.
 */
size_t metricus_result_len(const struct MetricusResult *result);

/**
 * Copies a per-class value into `labels` and `values` in ascending label
 * order. Both buffers hold `capacity` elements.
 *
 * # Safety
 * `result` is live; both buffers hold `capacity` writable elements.
 */
enum MetricusStatus metricus_result_per_class(const struct MetricusResult *result,
                                              int64_t *labels,
                                              double *values,
                                              size_t capacity);

/**
 * Copies a matrix value row-major into `cells` and its dimensions into
 * `rows` and `cols`.
 *
 * # Safety
 * `result` is live; `cells` holds `capacity` writable elements; `rows` and
 * `cols` are writable.
 */
enum MetricusStatus metricus_result_matrix(const struct MetricusResult *result,
                                           uint64_t *cells,
                                           size_t capacity,
                                           size_t *rows,
                                           size_t *cols);

/**
 * # Safety
 * `result` is NULL or a live handle.
 */
size_t metricus_result_warning_count(const struct MetricusResult *result);

/**
 * JSON object with `value`, `warnings` and `validation`, using the same
 * encoding as the command line (`"inf"` for infinity, string keys for
 * per-class maps).
 *
 * # Safety
 * `result` is live; `out` is writable.
 */
enum MetricusStatus metricus_result_json(const struct MetricusResult *result, char **out);

/**
 * # Safety
 * `result` is NULL or an undisposed handle from `metricus_evaluate`.
 */
void metricus_result_free(struct MetricusResult *result);

/**
 * Whether the report has no error findings.
 *
 * # Safety
 * `report` is NULL or a live handle.
 */
bool metricus_report_passed(const struct MetricusReport *report);

/**
 * Number of findings, optionally restricted to a severity (0 error,
 * 1 warning, 2 info, anything else for all).
 *
 * # Safety
 * `report` is NULL or a live handle.
 */
size_t metricus_report_count(const struct MetricusReport *report, int32_t severity);

/**
 * # Safety
 * `report` is live; `out` is writable.
 */
enum MetricusStatus metricus_report_json(const struct MetricusReport *report, char **out);

/**
 * # Safety
 * `report` is NULL or an undisposed handle from `metricus_validate`.
 */
void metricus_report_free(struct MetricusReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METRICUS_H */
