#ifndef TRACTOR_BGG_H
#define TRACTOR_BGG_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum tb_status {
  TB_STATUS_OK = 0,
  TB_STATUS_NULL_POINTER = 1,
  TB_STATUS_INVALID_INPUT = 2,
  TB_STATUS_NUMERICAL_FAILURE = 3,
  TB_STATUS_BUFFER_TOO_SMALL = 4,
  TB_STATUS_PANIC = 5,
} tb_status;

/**
 * Octagon surface group acting on a coefficient module.
 */
typedef struct tb_group tb_group;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread, NUL-terminated and
 * truncated to `cap` bytes, and returns the full length without the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes.
 */
size_t tb_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *tb_version(void);

/**
 * Ranks of the BGG bundles for the `sl(n+1)` label `labels[..n]`.
 *
 * # Safety
 * `labels` must hold `n` values, `dims` must be valid for `cap` values and
 * `len` must be writable.
 */
enum tb_status tb_bgg_dims(size_t n,
                           const int64_t *labels,
                           uint64_t *dims,
                           size_t cap,
                           size_t *len);

/**
 * Kostant homology dimensions for a family named as on the command line
 * (`dual`, `symk-dual:2`, ...).
 *
 * # Safety
 * `family` must be a NUL-terminated string, `dims` valid for `cap` values
 * and `len` writable.
 */
enum tb_status tb_kostant_homology(const char *family,
                                   size_t n,
                                   uint64_t *dims,
                                   size_t cap,
                                   size_t *len);

/**
 * Octagon group with coefficients `coefficients` (`trivial`, `defining`,
 * `symk:K`). Release with [`tb_group_free`].
 *
 * # Safety
 * `coefficients` must be a NUL-terminated string and `out` writable.
 */
enum tb_status tb_group_octagon(const char *coefficients, struct tb_group **out);

/**
 * # Safety
 * `group` must be null or a handle from [`tb_group_octagon`] not yet freed.
 */
void tb_group_free(struct tb_group *group);

/**
 * # Safety
 * `group` must be a live handle and `dim` writable.
 */
enum tb_status tb_group_coefficient_dim(const struct tb_group *group, size_t *dim);

/**
 * `dim H⁰` and `dim H¹` with the given rank tolerances (pass zero for the
 * defaults).
 *
 * # Safety
 * `group` must be a live handle and `h0`, `h1` writable.
 */
enum tb_status tb_group_cohomology(const struct tb_group *group,
                                   double rank_relative,
                                   double rank_gap,
                                   size_t *h0,
                                   size_t *h1);

/**
 * Holonomy of `word` (such as `"1,-2"`) at the origin, row-major into
 * `matrix`, with RK4 step `step` in hyperbolic arclength. `len` receives the
 * number of entries, the square of the coefficient dimension.
 *
 * # Safety
 * `group` must be a live handle, `word` a NUL-terminated string, `matrix`
 * valid for `cap` values and `len` writable.
 */
enum tb_status tb_group_holonomy(const struct tb_group *group,
                                 const char *word,
                                 double step,
                                 double *matrix,
                                 size_t cap,
                                 size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRACTOR_BGG_H */
