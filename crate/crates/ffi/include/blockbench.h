#ifndef BLOCKBENCH_H
#define BLOCKBENCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BbStatus {
  BB_STATUS_OK = 0,
  BB_STATUS_NULL_POINTER = -1,
  BB_STATUS_INVALID_ARGUMENT = -2,
  BB_STATUS_PARSE_ERROR = -3,
  BB_STATUS_PANIC = -4,
} BbStatus;

/**
 * Bi-objective problem handle.
 */
typedef struct BbBiProblem BbBiProblem;

/**
 * Single-objective problem handle.
 */
typedef struct BbProblem BbProblem;

/**
 * Outcome of one single-objective run.
 */
typedef struct BbRunSummary {
  uint64_t evaluations_used;
  double best_f;
  /**
   * 1 if the known optimum was reached.
   */
  int32_t hit_target;
  /**
   * Evaluation index of the first hit, or the budget when missed.
   */
  uint64_t fes;
} BbRunSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *bb_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bb_version(void);

/**
 * Builds suite instance `id` (F1..F10) with `n` bits and `m` blocks.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BbStatus bb_problem_from_suite(const char *id, size_t n, size_t m, struct BbProblem **out);

/**
 * Builds a problem from an instance JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BbStatus bb_problem_from_json(const char *json, struct BbProblem **out);

/**
 * Releases a problem handle. NULL is ignored.
 *
 * # Safety
 * `problem` must come from a `bb_problem_from_*` call and not be used afterwards.
 */
void bb_problem_free(struct BbProblem *problem);

/**
 * Writes the string length `n` and block count `m`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum BbStatus bb_problem_shape(const struct BbProblem *problem, size_t *n, size_t *m);

/**
 * Evaluates `bits[0..len]`. `block_values`, if not NULL, receives `m` values.
 *
 * # Safety
 * `bits` must hold `len` bytes, `f` must be valid and `block_values` must be
 * NULL or hold `m` slots.
 */
enum BbStatus bb_problem_evaluate(const struct BbProblem *problem,
                                  const uint8_t *bits,
                                  size_t len,
                                  double *f,
                                  uint64_t *block_values);

/**
 * Writes the global optimum when it is known analytically; `*known` is set
 * to 0 otherwise.
 *
 * # Safety
 * All pointers must be valid.
 */
enum BbStatus bb_problem_known_optimum(const struct BbProblem *problem,
                                       int32_t *known,
                                       double *value);

/**
 * Runs one single-objective algorithm. `config_json` is an algorithm config
 * such as `{"variant": "two_rate"}`; NULL means the (1+λ) EA defaults. With
 * `stop_at_optimum` the run ends at the known optimum.
 *
 * # Safety
 * `problem` and `out` must be valid; `config_json` NULL or NUL-terminated.
 */
enum BbStatus bb_run_single(const struct BbProblem *problem,
                            const char *config_json,
                            uint64_t budget,
                            uint64_t seed,
                            int32_t stop_at_optimum,
                            struct BbRunSummary *out);

/**
 * Builds bi-objective suite instance `id` (BF1..BF5).
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BbStatus bb_bi_problem_from_suite(const char *id,
                                       size_t n,
                                       size_t m,
                                       struct BbBiProblem **out);

/**
 * Builds a bi-objective problem from `{"first": ..., "second": ...}` JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BbStatus bb_bi_problem_from_json(const char *json, struct BbBiProblem **out);

/**
 * Releases a bi-objective handle. NULL is ignored.
 *
 * # Safety
 * `problem` must come from a `bb_bi_problem_from_*` call and not be used afterwards.
 */
void bb_bi_problem_free(struct BbBiProblem *problem);

/**
 * Evaluates both objectives of `bits[0..len]`.
 *
 * # Safety
 * `bits` must hold `len` bytes; `y1` and `y2` must be valid.
 */
enum BbStatus bb_bi_problem_evaluate(const struct BbBiProblem *problem,
                                     const uint8_t *bits,
                                     size_t len,
                                     double *y1,
                                     double *y2);

/**
 * Area dominated by the points `(y1[i], y2[i])` (maximisation) above the
 * reference point `(r1, r2)`.
 *
 * # Safety
 * `y1` and `y2` must hold `len` values; `out` must be valid.
 */
enum BbStatus bb_hypervolume_2d(const double *y1,
                                const double *y2,
                                size_t len,
                                double r1,
                                double r2,
                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCKBENCH_H */
