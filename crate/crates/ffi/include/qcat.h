#ifndef QCAT_H
#define QCAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum QcatStatus {
  QCAT_STATUS_OK = 0,
  QCAT_STATUS_NULL_POINTER = 1,
  QCAT_STATUS_INVALID_ARGUMENT = 2,
  QCAT_STATUS_OUT_OF_ENVELOPE = 3,
  QCAT_STATUS_NO_CONVERGENCE = 4,
  QCAT_STATUS_NUMERICAL = 5,
  QCAT_STATUS_PANIC = 6,
} QcatStatus;

/**
 * Which endpoint's gap weights a schedule step.
 */
typedef enum QcatEdgeConvention {
  QCAT_EDGE_CONVENTION_DESTINATION = 0,
  QCAT_EDGE_CONVENTION_SOURCE = 1,
  QCAT_EDGE_CONVENTION_AVERAGE = 2,
} QcatEdgeConvention;

/**
 * Gap landscape over a (Gamma, kappa) raster.
 */
typedef struct QcatLandscape QcatLandscape;

/**
 * Optimal annealing schedule.
 */
typedef struct QcatPath QcatPath;

/**
 * Piecewise-parabolic double well in scale-free units.
 */
typedef struct QcatWell QcatWell;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qcat_version(void);

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next qcat call on the same thread.
 */
const char *qcat_last_error(void);

/**
 * The `k` lowest eigenvalues of the p-spin Hamiltonian at (gamma, kappa), written to `levels[0..k]`.
 *
 * # Safety
 * `levels` must point to `k` writable doubles.
 */
enum QcatStatus qcat_pspin_levels(uint32_t two_j,
                                  uint32_t p,
                                  double gamma,
                                  double kappa,
                                  size_t k,
                                  double *levels);

/**
 * Max-min gap saddle of the p-spin landscape with default search grids.
 *
 * # Safety
 * Output pointers must be valid for writes.
 */
enum QcatStatus qcat_saddle_search(uint32_t two_j,
                                   uint32_t p,
                                   double *gamma_c,
                                   double *kappa_c,
                                   double *gap);

/**
 * Weber parabolic cylinder function D_nu(x).
 *
 * # Safety
 * `value` must be valid for writes.
 */
enum QcatStatus qcat_parabolic_cylinder(double nu, double x, double *value);

/**
 * Scans Delta01 over the raster `gamma[0..ng] x kappa[0..nk]`.
 *
 * # Safety
 * Axis pointers must hold `ng` and `nk` doubles; `handle` must be valid for writes.
 */
enum QcatStatus qcat_landscape_scan(uint32_t two_j,
                                    uint32_t p,
                                    const double *gamma,
                                    size_t ng,
                                    const double *kappa,
                                    size_t nk,
                                    struct QcatLandscape **handle);

/**
 * Raster shape as (Gamma points, kappa points).
 *
 * # Safety
 * `handle` must come from [`qcat_landscape_scan`]; outputs valid for writes.
 */
enum QcatStatus qcat_landscape_shape(const struct QcatLandscape *handle, size_t *ng, size_t *nk);

/**
 * Delta01 at raster cell (gi, ki).
 *
 * # Safety
 * `handle` must come from [`qcat_landscape_scan`]; `value` valid for writes.
 */
enum QcatStatus qcat_landscape_delta01(const struct QcatLandscape *handle,
                                       size_t gi,
                                       size_t ki,
                                       double *value);

/**
 * Releases a landscape. Null is ignored.
 *
 * # Safety
 * `handle` must come from [`qcat_landscape_scan`] and not be used afterwards.
 */
void qcat_landscape_free(struct QcatLandscape *handle);

/**
 * Creates a double well with displacements xi1, xi2 and width ratios beta1, beta2.
 *
 * # Safety
 * `handle` must be valid for writes.
 */
enum QcatStatus qcat_well_new(double xi1,
                              double xi2,
                              double beta1,
                              double beta2,
                              struct QcatWell **handle);

/**
 * Ground-to-first-excited gap in units of hbar omega*.
 *
 * # Safety
 * `handle` must come from [`qcat_well_new`]; `value` valid for writes.
 */
enum QcatStatus qcat_well_gap_ratio(const struct QcatWell *handle, double *value);

/**
 * Ground-state energy below the summit in units of hbar omega*.
 *
 * # Safety
 * `handle` must come from [`qcat_well_new`]; `value` valid for writes.
 */
enum QcatStatus qcat_well_ground_deficit(const struct QcatWell *handle, double *value);

/**
 * Releases a well. Null is ignored.
 *
 * # Safety
 * `handle` must come from [`qcat_well_new`] and not be used afterwards.
 */
void qcat_well_free(struct QcatWell *handle);

/**
 * Shortest schedule from (1, 1) to (0, 1) over a landscape whose axes run over [0, 1].
 *
 * # Safety
 * `landscape` must come from [`qcat_landscape_scan`]; `handle` valid for writes.
 */
enum QcatStatus qcat_path_shortest(const struct QcatLandscape *landscape,
                                   enum QcatEdgeConvention convention,
                                   struct QcatPath **handle);

/**
 * Number of cells on the path, and its total time.
 *
 * # Safety
 * `handle` must come from [`qcat_path_shortest`]; outputs valid for writes.
 */
enum QcatStatus qcat_path_summary(const struct QcatPath *handle, size_t *cells, double *total_time);

/**
 * Control point and running time at path position `i`.
 *
 * # Safety
 * `handle` must come from [`qcat_path_shortest`]; outputs valid for writes.
 */
enum QcatStatus qcat_path_cell(const struct QcatPath *handle,
                               size_t i,
                               double *gamma,
                               double *kappa,
                               double *cumulative);

/**
 * Releases a path. Null is ignored.
 *
 * # Safety
 * `handle` must come from [`qcat_path_shortest`] and not be used afterwards.
 */
void qcat_path_free(struct QcatPath *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCAT_H */
