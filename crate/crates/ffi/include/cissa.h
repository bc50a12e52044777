#ifndef CISSA_H
#define CISSA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes. Values 2..=4 match the command line exit codes.
 */
typedef enum CissaStatus {
  CISSA_STATUS_OK = 0,
  CISSA_STATUS_NULL_POINTER = 1,
  CISSA_STATUS_INVALID_ARGUMENT = 2,
  CISSA_STATUS_INPUT_ERROR = 3,
  CISSA_STATUS_NUMERIC_ERROR = 4,
  CISSA_STATUS_BUFFER_TOO_SMALL = 5,
  CISSA_STATUS_PANIC = 6,
} CissaStatus;

/*
 Boundary extension selector.
 */
typedef enum CissaExtension {
  CISSA_EXTENSION_AR = 0,
  CISSA_EXTENSION_MIRROR = 1,
  CISSA_EXTENSION_NONE = 2,
} CissaExtension;

/*
 Opaque decomposition handle.
 */
typedef struct CissaDecomposition CissaDecomposition;

/*
 Opaque grouping handle.
 */
typedef struct CissaGrouping CissaGrouping;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. Valid until the
 next failing call on the same thread.
 */
const char *cissa_last_error(void);

/*
 Decomposes `len` samples with window `window`. `ar_order` = 0 selects the
 default order `floor(T/3)`; it is ignored for the other extensions.

 # Safety
 `x` must point to `len` readable doubles and `out` to writable storage for
 one pointer. On success `*out` must later be passed to
 [`cissa_decomposition_free`].
 */
enum CissaStatus cissa_decompose(const double *x,
                                 size_t len,
                                 size_t window,
                                 enum CissaExtension extension,
                                 size_t ar_order,
                                 struct CissaDecomposition **out);

/*
 # Safety
 `handle` must be NULL or a pointer from [`cissa_decompose`] not yet freed.
 */
void cissa_decomposition_free(struct CissaDecomposition *handle);

/*
 Series length `T`, or 0 for NULL.

 # Safety
 `handle` must be NULL or a live decomposition handle.
 */
size_t cissa_decomposition_len(const struct CissaDecomposition *handle);

/*
 Window length `L`, or 0 for NULL.

 # Safety
 `handle` must be NULL or a live decomposition handle.
 */
size_t cissa_decomposition_window(const struct CissaDecomposition *handle);

/*
 Number of components `F = floor(L/2)+1`, or 0 for NULL.

 # Safety
 `handle` must be NULL or a live decomposition handle.
 */
size_t cissa_decomposition_num_frequencies(const struct CissaDecomposition *handle);

/*
 Copies component `k` (1-based) into `out`, which must hold `T` values.

 # Safety
 `handle` must be a live decomposition handle and `out` must point to
 `out_len` writable doubles.
 */
enum CissaStatus cissa_decomposition_component(const struct CissaDecomposition *handle,
                                               size_t k,
                                               double *out,
                                               size_t out_len);

/*
 Copies the `L` psd values (`k = 1..L`) into `out`.

 # Safety
 `handle` must be a live decomposition handle and `out` must point to
 `out_len` writable doubles.
 */
enum CissaStatus cissa_decomposition_psd(const struct CissaDecomposition *handle,
                                         double *out,
                                         size_t out_len);

/*
 Trend, business cycle and seasonal groups for `per_year` observations a year.

 # Safety
 `handle` must be a live decomposition handle; `out` must be writable. The
 returned grouping must be released with [`cissa_grouping_free`].
 */
enum CissaStatus cissa_group_economic(const struct CissaDecomposition *handle,
                                      size_t per_year,
                                      struct CissaGrouping **out);

/*
 Manual groups given in CSR layout: group `g` holds
 `indices[offsets[g] .. offsets[g+1]]`; `offsets` has `num_groups + 1` entries.

 # Safety
 `indices` must point to `offsets[num_groups]` readable values and `offsets`
 to `num_groups + 1`; other pointers as for [`cissa_group_economic`].
 */
enum CissaStatus cissa_group_manual(const struct CissaDecomposition *handle,
                                    const size_t *indices,
                                    const size_t *offsets,
                                    size_t num_groups,
                                    struct CissaGrouping **out);

/*
 Smallest set of largest-share frequencies reaching `target` in (0,1).

 # Safety
 As for [`cissa_group_economic`].
 */
enum CissaStatus cissa_group_share(const struct CissaDecomposition *handle,
                                   double target,
                                   struct CissaGrouping **out);

/*
 Frequencies whose psd exceeds percentile `q` in (0,1).

 # Safety
 As for [`cissa_group_economic`].
 */
enum CissaStatus cissa_group_percentile(const struct CissaDecomposition *handle,
                                        double q,
                                        struct CissaGrouping **out);

/*
 # Safety
 `handle` must be NULL or a grouping handle not yet freed.
 */
void cissa_grouping_free(struct CissaGrouping *handle);

/*
 Number of groups, or 0 for NULL.

 # Safety
 `handle` must be NULL or a live grouping handle.
 */
size_t cissa_grouping_num_groups(const struct CissaGrouping *handle);

/*
 Share of total psd for group `g` (0-based) as a fraction; NaN when out of range.

 # Safety
 `handle` must be NULL or a live grouping handle.
 */
double cissa_grouping_share(const struct CissaGrouping *handle, size_t g);

/*
 Copies the reconstructed series of group `g` (0-based) into `out`.

 # Safety
 `handle` must be a live grouping handle and `out` must point to `out_len`
 writable doubles.
 */
enum CissaStatus cissa_grouping_series(const struct CissaGrouping *handle,
                                       size_t g,
                                       double *out,
                                       size_t out_len);

/*
 Number of frequency indices in group `g` (0-based), or 0 when out of range.

 # Safety
 `handle` must be NULL or a live grouping handle.
 */
size_t cissa_grouping_indices_len(const struct CissaGrouping *handle, size_t g);

/*
 Copies the 1-based frequency indices of group `g` into `out`.

 # Safety
 `handle` must be a live grouping handle and `out` must point to `out_len`
 writable values.
 */
enum CissaStatus cissa_grouping_indices(const struct CissaGrouping *handle,
                                        size_t g,
                                        size_t *out,
                                        size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CISSA_H */
