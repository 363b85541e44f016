#ifndef ZENOLAB_H
#define ZENOLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Analytic bounds selectable through the C ABI.
 */
typedef enum ZenolabBound {
  /**
   * `t^2 ||H||^2 / N`.
   */
  FirstOrder = 0,
  /**
   * `t^3 ||H||^3 / (3 N^2)`.
   */
  SecondOrder = 1,
  /**
   * `t^2 ||[H, RHR]|| / (8N)` (paired-kick form).
   */
  KickCommutator = 2,
} ZenolabBound;

/**
 * Sequence families selectable through the C ABI.
 */
typedef enum ZenolabFamily {
  /**
   * `(P e^{-iHt/N} P)^N`, compared against `e^{-iPHPt}P`.
   */
  Measurement = 0,
  /**
   * `(P e^{-iHdt/2} R e^{-iHdt/2} P)^N`, same target.
   */
  Measurement2 = 1,
  /**
   * `(P S_2k P)^N`, same target (uses `k`).
   */
  Measurement2k = 2,
  /**
   * `(R e^{-iHt/N})^N`, compared against `R^N e^{-iH_Z t}`.
   */
  Kick = 3,
  /**
   * `S_2k^N`, compared against `e^{-iH_Z t}` (uses `k`).
   */
  Kick2k = 4,
  /**
   * Single UDD step of size `t`, compared against `e^{-iH_Z t}`
   * (uses `k`; `n` ignored).
   */
  Udd = 5,
} ZenolabFamily;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum ZenolabStatus {
  Ok = 0,
  NullPointer = 1,
  InvalidArgument = 2,
  DimMismatch = 3,
  NotHermitian = 4,
  NotProjector = 5,
  NotDensityMatrix = 6,
  UnsupportedRange = 7,
  SolverFailure = 8,
  FitFailure = 9,
  ConfigError = 10,
  IoError = 11,
  Utf8Error = 12,
} ZenolabStatus;

/**
 * Opaque handle to a validated Hamiltonian/projector system.
 */
typedef struct ZenolabSystem ZenolabSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a system descriptor (preset `zz_x:beta=..,J=..` or the
 * `dim/H/P` text form) into a new handle.
 *
 * # Safety
 * `descriptor` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
enum ZenolabStatus zenolab_system_parse(const char *descriptor, struct ZenolabSystem **out);

/**
 * Builds the two-qubit worked example with the given parameters.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ZenolabStatus zenolab_system_example(double beta, double j, struct ZenolabSystem **out);

/**
 * Draws a seeded random system (normalized Hamiltonian, rank-`rank`
 * projector).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ZenolabStatus zenolab_system_random(uintptr_t dim,
                                         uintptr_t rank,
                                         uint64_t seed,
                                         struct ZenolabSystem **out);

/**
 * Releases a system handle. Passing NULL is a no-op.
 *
 * # Safety
 * `sys` must be a handle returned by this library, freed at most once.
 */
void zenolab_system_free(struct ZenolabSystem *sys);

/**
 * Hilbert-space dimension of a system.
 *
 * # Safety
 * `sys` must be a live handle; `out` a valid pointer.
 */
enum ZenolabStatus zenolab_system_dim(const struct ZenolabSystem *sys, uintptr_t *out);

/**
 * The block norms `beta = ||H_Z||` and `J = ||H_PQ||`.
 *
 * # Safety
 * `sys` must be a live handle; out-pointers valid.
 */
enum ZenolabStatus zenolab_system_norms(const struct ZenolabSystem *sys,
                                        double *beta_out,
                                        double *j_out);

/**
 * Compiles a sequence of the given family and writes its Zeno error
 * (spectral-norm distance to the ideal target) to `error_out`.
 *
 * # Safety
 * `sys` must be a live handle; `error_out` a valid pointer.
 */
enum ZenolabStatus zenolab_zeno_error(const struct ZenolabSystem *sys,
                                      enum ZenolabFamily family,
                                      uintptr_t k,
                                      uintptr_t n,
                                      double t,
                                      double *error_out);

/**
 * Evaluates an analytic error bound.
 *
 * # Safety
 * `sys` must be a live handle; `bound_out` a valid pointer.
 */
enum ZenolabStatus zenolab_bound(const struct ZenolabSystem *sys,
                                 enum ZenolabBound bound,
                                 double t,
                                 uintptr_t n,
                                 double *bound_out);

/**
 * Solves the compact-sequence coefficients for `order` in {3, 4}. Writes up
 * to `cap` values into `values_out` and the count into `len_out`.
 *
 * # Safety
 * `values_out` must point to at least `cap` doubles; `len_out` valid.
 */
enum ZenolabStatus zenolab_solve_compact_coefficients(uintptr_t order,
                                                      double *values_out,
                                                      uintptr_t cap,
                                                      uintptr_t *len_out);

/**
 * The `n`-th positive zero of the Bessel function `J0` (`n` in 1..=5).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ZenolabStatus zenolab_bessel_j0_zero(uintptr_t n, double *out);

/**
 * Reflection count of the order-`2k` Trotter step (`2 * 5^(k-1)`).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ZenolabStatus zenolab_reflection_count(uintptr_t k, uintptr_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZENOLAB_H */
