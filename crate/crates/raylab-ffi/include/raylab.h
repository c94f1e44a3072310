#ifndef RAYLAB_H
#define RAYLAB_H

/* Generated by cbindgen from raylab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum RaylabStatus {
  RAYLAB_STATUS_OK = 0,
  RAYLAB_STATUS_NULL_POINTER = 1,
  RAYLAB_STATUS_INVALID_ARGUMENT = 2,
  RAYLAB_STATUS_DIMENSION_MISMATCH = 3,
  RAYLAB_STATUS_NOT_NORMALIZED = 4,
  RAYLAB_STATUS_VANISHING_OVERLAP = 5,
  RAYLAB_STATUS_PROMISE_VIOLATED = 6,
  RAYLAB_STATUS_LINEARLY_DEPENDENT = 7,
  RAYLAB_STATUS_NUMERICAL_FAILURE = 8,
} RaylabStatus;

/**
 * Opaque handle to a Kraus channel.
 */
typedef struct RaylabChannel RaylabChannel;

/**
 * Opaque handle to an overlap promise (reference state plus c1, c2).
 */
typedef struct RaylabPromise RaylabPromise;

/**
 * Opaque handle to a ray (rank-one projector).
 */
typedef struct RaylabRay RaylabRay;

/**
 * Opaque handle to a normalized state vector.
 */
typedef struct RaylabState RaylabState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a state from `2*dim` interleaved `[re, im]` doubles; the vector
 * must be normalized.
 *
 * # Safety
 * `amplitudes` must point to `2*dim` readable doubles and `out` must be a
 * valid writable pointer. The returned handle must be released with
 * [`raylab_state_free`].
 */
enum RaylabStatus raylab_state_new(const double *amplitudes, size_t dim, struct RaylabState **out);

/**
 * The computational basis state |index⟩ in dimension `dim`.
 *
 * # Safety
 * `out` must be a valid writable pointer; release with
 * [`raylab_state_free`].
 */
enum RaylabStatus raylab_state_basis(size_t dim, size_t index, struct RaylabState **out);

/**
 * A Haar-random state, deterministic for a fixed seed.
 *
 * # Safety
 * `out` must be a valid writable pointer; release with
 * [`raylab_state_free`].
 */
enum RaylabStatus raylab_state_random(size_t dim, uint64_t seed, struct RaylabState **out);

/**
 * Dimension of a state handle; 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle from this library.
 */
size_t raylab_state_dim(const struct RaylabState *state);

/**
 * Copies the amplitudes into `buffer` as `2*dim` interleaved doubles.
 *
 * # Safety
 * `state` must be a live handle; `buffer` must point to `2*dim` writable
 * doubles.
 */
enum RaylabStatus raylab_state_amplitudes(const struct RaylabState *state, double *buffer);

/**
 * Multiplies every amplitude by e^{i·gamma}; the ray is unchanged.
 *
 * # Safety
 * `state` must be a live handle and `out` a valid writable pointer;
 * release the result with [`raylab_state_free`].
 */
enum RaylabStatus raylab_state_rephase(const struct RaylabState *state,
                                       double gamma,
                                       struct RaylabState **out);

/**
 * Releases a state handle; null is ignored.
 *
 * # Safety
 * `state` must be null or a handle produced by this library and not yet
 * freed.
 */
void raylab_state_free(struct RaylabState *state);

/**
 * The rank-one projector of a normalized state.
 *
 * # Safety
 * `state` must be a live handle and `out` a valid writable pointer;
 * release the result with [`raylab_ray_free`].
 */
enum RaylabStatus raylab_ray_from_state(const struct RaylabState *state, struct RaylabRay **out);

/**
 * Releases a ray handle; null is ignored.
 *
 * # Safety
 * `ray` must be null or a handle produced by this library and not yet
 * freed.
 */
void raylab_ray_free(struct RaylabRay *ray);

/**
 * Transition probability tr(P·Q) of two rays.
 *
 * # Safety
 * `p` and `q` must be live handles; `out` must be writable.
 */
enum RaylabStatus raylab_overlap_probability(const struct RaylabRay *p,
                                             const struct RaylabRay *q,
                                             double *out);

/**
 * The reference-calibrated superposition ray of (ψ, φ) against χ with
 * weights (α, β); also reports the squared norm of the unnormalized
 * superposition vector.
 *
 * # Safety
 * All handles must be live; `out_ray` and `out_norm_sq` must be writable.
 * Release the ray with [`raylab_ray_free`].
 */
enum RaylabStatus raylab_reference_superposition(const struct RaylabState *chi,
                                                 const struct RaylabState *psi,
                                                 const struct RaylabState *phi,
                                                 double alpha_re,
                                                 double alpha_im,
                                                 double beta_re,
                                                 double beta_im,
                                                 struct RaylabRay **out_ray,
                                                 double *out_norm_sq);

/**
 * An overlap promise: reference state χ with promised overlaps c1, c2.
 *
 * # Safety
 * `chi` must be a live handle and `out` writable; release with
 * [`raylab_promise_free`].
 */
enum RaylabStatus raylab_promise_new(const struct RaylabState *chi,
                                     double c1,
                                     double c2,
                                     struct RaylabPromise **out);

/**
 * Releases a promise handle; null is ignored.
 *
 * # Safety
 * `promise` must be null or a handle produced by this library and not yet
 * freed.
 */
void raylab_promise_free(struct RaylabPromise *promise);

/**
 * Compiles the promise into the postselected superposition channel.
 *
 * # Safety
 * `promise` must be a live handle and `out` writable; release with
 * [`raylab_channel_free`].
 */
enum RaylabStatus raylab_protocol_channel_new(const struct RaylabPromise *promise,
                                              double alpha_re,
                                              double alpha_im,
                                              double beta_re,
                                              double beta_im,
                                              struct RaylabChannel **out);

/**
 * Releases a channel handle; null is ignored.
 *
 * # Safety
 * `channel` must be null or a handle produced by this library and not yet
 * freed.
 */
void raylab_channel_free(struct RaylabChannel *channel);

/**
 * Trace-nonincreasing check: writes 1/0 and the largest eigenvalue of
 * the Kraus Gram sum.
 *
 * # Safety
 * `channel` must be a live handle; `out_ok` and `out_max_eigenvalue` must
 * be writable.
 */
enum RaylabStatus raylab_channel_is_cptni(const struct RaylabChannel *channel,
                                          double tol,
                                          int32_t *out_ok,
                                          double *out_max_eigenvalue);

/**
 * Simulated and closed-form success probabilities of the compiled
 * protocol on a promise-satisfying pair.
 *
 * # Safety
 * All handles must be live; `out_simulated` and `out_formula` must be
 * writable.
 */
enum RaylabStatus raylab_protocol_success_probability(const struct RaylabChannel *channel,
                                                      const struct RaylabPromise *promise,
                                                      const struct RaylabState *psi,
                                                      const struct RaylabState *phi,
                                                      double alpha_re,
                                                      double alpha_im,
                                                      double beta_re,
                                                      double beta_im,
                                                      double *out_simulated,
                                                      double *out_formula);

/**
 * Linear-independence test of a family of state handles: writes 1/0, the
 * rank, and the smallest singular value of the column matrix.
 *
 * # Safety
 * `family` must point to `count` live state handles; the out-pointers
 * must be writable.
 */
enum RaylabStatus raylab_linear_independence(const struct RaylabState *const *family,
                                             size_t count,
                                             int32_t *out_independent,
                                             size_t *out_rank,
                                             double *out_sigma_min);

/**
 * The uniform conclusive weight λ of the unambiguous-discrimination POVM
 * for a linearly independent family.
 *
 * # Safety
 * `family` must point to `count` live state handles; `out_lambda` must be
 * writable.
 */
enum RaylabStatus raylab_ud_povm_lambda(const struct RaylabState *const *family,
                                        size_t count,
                                        double *out_lambda);

/**
 * One step of the overlap recursion a ↦ (3 − 4|a|²)·a.
 *
 * # Safety
 * `out_re` and `out_im` must be writable.
 */
enum RaylabStatus raylab_overlap_recursion_step(double a_re,
                                                double a_im,
                                                double *out_re,
                                                double *out_im);

/**
 * ⌈log₄(N/4)⌉ for N ≥ 4.
 *
 * # Safety
 * `out` must be writable.
 */
enum RaylabStatus raylab_round_bound(size_t size, size_t *out);

/**
 * Runs the reflection-iterated search in the exact two-dimensional
 * subspace until `target_p`: writes oracle queries used and the final
 * success probability.
 *
 * # Safety
 * `out_queries` and `out_probability` must be writable.
 */
enum RaylabStatus raylab_super_grover_rounds(uint32_t qubits,
                                             size_t marked,
                                             double target_p,
                                             uint64_t *out_queries,
                                             double *out_probability);

/**
 * The qubit cos(x/2)|0⟩ + e^{−iy}·sin(x/2)|1⟩.
 *
 * # Safety
 * `out` must be writable; release with [`raylab_state_free`].
 */
enum RaylabStatus raylab_bloch_state(double polar, double azimuth, struct RaylabState **out);

/**
 * The planar constraint (A, B, C, D) of the circle |⟨χ|ψ⟩|² = c, written
 * into a 4-element buffer.
 *
 * # Safety
 * `chi` must be a live qubit handle; `out_abcd` must point to 4 writable
 * doubles.
 */
enum RaylabStatus raylab_fixed_overlap_circle(const struct RaylabState *chi,
                                              double c,
                                              double *out_abcd);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAYLAB_H */
