#ifndef MULTISLICE_H
#define MULTISLICE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_SPEC = 2,
  MS_STATUS_ENUMERATION_TOO_LARGE = 3,
  MS_STATUS_INDEX_OUT_OF_RANGE = 4,
  MS_STATUS_INVALID_ARGUMENT = 5,
  MS_STATUS_SHAPE_MISMATCH = 6,
  MS_STATUS_DOMAIN = 7,
  MS_STATUS_HYPOTHESIS = 8,
  MS_STATUS_UNKNOWN_ID = 9,
  MS_STATUS_CONFIG = 10,
  MS_STATUS_IO = 11,
  MS_STATUS_BUFFER_TOO_SMALL = 12,
  MS_STATUS_PANIC = 13,
} MsStatus;

/**
 * Tail verdicts as integers: `PASS`, `FAIL`, `DOMINATED`, `VIOLATED`.
 */
typedef enum MsVerdict {
  MS_VERDICT_PASS = 0,
  MS_VERDICT_FAIL = 1,
  MS_VERDICT_DOMINATED = 2,
  MS_VERDICT_VIOLATED = 3,
} MsVerdict;

/**
 * A tail bound with all parameters fixed.
 */
typedef struct MsBound MsBound;

/**
 * A finite set of configurations of equal length.
 */
typedef struct MsSet MsSet;

/**
 * A multislice specification.
 */
typedef struct MsSpec MsSpec;

/**
 * The result of a tail experiment.
 */
typedef struct MsTailReport MsTailReport;

typedef struct MsTailRow {
  double t;
  double p_hat;
  double ci_lo;
  double ci_hi;
  double bound;
  enum MsVerdict verdict;
} MsTailRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Length in bytes of the last error message on this thread, excluding the
 * terminating NUL.
 */
size_t ms_last_error_length(void);

/**
 * Copies the last error message, NUL-terminated, into `buf`. Fails with
 * `BufferTooSmall` unless `len > ms_last_error_length()`.
 *
 * # Safety
 * `buf` must point to `len` writable bytes.
 */
enum MsStatus ms_last_error_message(char *buf, size_t len);

/**
 * Builds a spec from `len` counts and `len` strictly increasing values.
 *
 * # Safety
 * `kappa` and `values` must point to `len` elements; `out` must be writable.
 */
enum MsStatus ms_spec_new(const size_t *kappa,
                          const double *values,
                          size_t len,
                          struct MsSpec **out);

/**
 * # Safety
 * `spec` must be null or come from [`ms_spec_new`], and not be used again.
 */
void ms_spec_free(struct MsSpec *spec);

/**
 * `N`, the configuration length; 0 for a null handle.
 *
 * # Safety
 * `spec` must be null or a live handle.
 */
size_t ms_spec_total(const struct MsSpec *spec);

/**
 * `|Ω_κ|`; `EnumerationTooLarge` if it does not fit in 64 bits.
 *
 * # Safety
 * `spec` must be a live handle and `out` writable.
 */
enum MsStatus ms_spec_cardinality(const struct MsSpec *spec, uint64_t *out);

/**
 * Writes sample `index` of the stream family `seed`, a uniform
 * configuration of length `N`, into `out`. The same `(seed, index)` gives
 * the same configuration as the Rust API and the CLI.
 *
 * # Safety
 * `spec` must be a live handle and `out` must point to `out_len` writable values.
 */
enum MsStatus ms_sample(const struct MsSpec *spec,
                        uint64_t seed,
                        uint64_t index,
                        double *out,
                        size_t out_len);

/**
 * A set of `count` configurations of length `len`, stored row-major.
 *
 * # Safety
 * `entries` must point to `count * len` values; `out` must be writable.
 */
enum MsStatus ms_set_new(const double *entries, size_t count, size_t len, struct MsSet **out);

/**
 * # Safety
 * `set` must be null or come from [`ms_set_new`], and not be used again.
 */
void ms_set_free(struct MsSet *set);

/**
 * Convex distance from `omega` to `set`. `value` is an upper bound and
 * `value − gap` a lower bound.
 *
 * # Safety
 * `set` must be a live handle, `omega` must point to `len` values and
 * `value`, `gap` must be writable.
 */
enum MsStatus ms_convex_distance(const struct MsSet *set,
                                 const double *omega,
                                 size_t len,
                                 double tol,
                                 double *value,
                                 double *gap);

/**
 * Parses a bound from TOML, e.g. `id = "serfling"` plus its parameters.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` writable.
 */
enum MsStatus ms_bound_from_toml(const char *toml, struct MsBound **out);

/**
 * # Safety
 * `bound` must be null or come from [`ms_bound_from_toml`], and not be used again.
 */
void ms_bound_free(struct MsBound *bound);

/**
 * The bound at `t`, capped at 1.
 *
 * # Safety
 * `bound` must be a live handle and `out` writable.
 */
enum MsStatus ms_bound_evaluate(const struct MsBound *bound, double t, double *out);

/**
 * Exact binomial confidence interval at level `1 − alpha`.
 *
 * # Safety
 * `lo` and `hi` must be writable.
 */
enum MsStatus ms_clopper_pearson(uint64_t successes,
                                 uint64_t trials,
                                 double alpha,
                                 double *lo,
                                 double *hi);

/**
 * Runs a tail experiment described by a TOML config.
 *
 * # Safety
 * `config` must be a NUL-terminated string and `out` writable.
 */
enum MsStatus ms_tail_run(const char *config, struct MsTailReport **out);

/**
 * # Safety
 * `report` must be null or come from [`ms_tail_run`], and not be used again.
 */
void ms_tail_report_free(struct MsTailReport *report);

/**
 * Number of grid rows; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t ms_tail_report_len(const struct MsTailReport *report);

/**
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum MsStatus ms_tail_report_row(const struct MsTailReport *report,
                                 size_t index,
                                 struct MsTailRow *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTISLICE_H */
