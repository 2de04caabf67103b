#ifndef RIGLAB_H
#define RIGLAB_H

/* Generated by cbindgen from riglab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum RiglabStatus {
  RiglabStatus_Ok = 0,
  RiglabStatus_NullPointer = 1,
  RiglabStatus_Utf8Error = 2,
  RiglabStatus_InvalidArgument = 3,
  RiglabStatus_NumericError = 4,
  RiglabStatus_GuardTripped = 5,
} RiglabStatus;

/**
 * Opaque truncated-pmf handle (probabilities plus residual tail mass).
 */
typedef struct RiglabPmf RiglabPmf;

/**
 * Opaque weight-law handle.
 */
typedef struct RiglabWeight RiglabWeight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; do not free.
 */
const char *riglab_version(void);

/**
 * Last error message of this thread, or NULL when none was recorded.
 * The caller owns the returned string and frees it with
 * `riglab_string_free`.
 */
char *riglab_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a riglab function and not freed before.
 */
void riglab_string_free(char *s);

/**
 * Parse a weight law from its JSON form, e.g.
 * `{"variant":"pareto","t0":1.0,"kappa":3.5}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RiglabStatus riglab_weight_from_json(const char *json, struct RiglabWeight **out);

/**
 * # Safety
 * `w` must be a handle from `riglab_weight_from_json`, freed at most once.
 */
void riglab_weight_free(struct RiglabWeight *w);

/**
 * Closed-form moment `E Z^order`.
 *
 * # Safety
 * `w` and `out` must be valid pointers.
 */
enum RiglabStatus riglab_weight_moment(const struct RiglabWeight *w, int32_t order, double *out);

/**
 * One reproducible draw from the stream keyed by `(seed, index)`.
 *
 * # Safety
 * `w` and `out` must be valid pointers.
 */
enum RiglabStatus riglab_weight_sample(const struct RiglabWeight *w,
                                       uint64_t seed,
                                       uint64_t index,
                                       double *out);

/**
 * Mixed Poisson pmf with intensity `scale * Z`, `Z ~ mixer`; entries are
 * certified within `tol`.
 *
 * # Safety
 * `mixer` and `out` must be valid pointers.
 */
enum RiglabStatus riglab_mixed_poisson_pmf(const struct RiglabWeight *mixer,
                                           double scale,
                                           size_t r_max,
                                           double tol,
                                           struct RiglabPmf **out);

/**
 * Limit law of the vertex degree in the beta regime (`m/n -> beta`):
 * the compound Poisson mixture `d*` built from the two weight laws.
 *
 * # Safety
 * `p1`, `p2` and `out` must be valid pointers.
 */
enum RiglabStatus riglab_dstar_pmf(const struct RiglabWeight *p1,
                                   const struct RiglabWeight *p2,
                                   double beta,
                                   size_t r_max,
                                   double tol,
                                   struct RiglabPmf **out);

/**
 * Limit of the clustering coefficient, `kappa / (kappa + sqrt(beta))`.
 *
 * # Safety
 * `p1`, `p2` and `out` must be valid pointers.
 */
enum RiglabStatus riglab_clustering_limit(const struct RiglabWeight *p1,
                                          const struct RiglabWeight *p2,
                                          double beta,
                                          double *out);

/**
 * Sample `replicas` intersection graphs with the fast generator and return
 * the pooled empirical degree pmf.
 *
 * # Safety
 * `p1`, `p2` and `out` must be valid pointers.
 */
enum RiglabStatus riglab_simulate_degree_pmf(const struct RiglabWeight *p1,
                                             const struct RiglabWeight *p2,
                                             size_t n,
                                             size_t m,
                                             uint64_t seed,
                                             uint32_t replicas,
                                             struct RiglabPmf **out);

/**
 * Number of retained entries (`r_max + 1`); 0 for NULL.
 *
 * # Safety
 * `p` must be a valid pmf handle or NULL.
 */
size_t riglab_pmf_len(const struct RiglabPmf *p);

/**
 * Probability at `r` (0 beyond the truncation or for NULL).
 *
 * # Safety
 * `p` must be a valid pmf handle or NULL.
 */
double riglab_pmf_get(const struct RiglabPmf *p, size_t r);

/**
 * Certified upper bound on the mass beyond the truncation.
 *
 * # Safety
 * `p` must be a valid pmf handle or NULL.
 */
double riglab_pmf_residual(const struct RiglabPmf *p);

/**
 * Copy the probabilities into `buf` (at most `len` entries); returns the
 * number written.
 *
 * # Safety
 * `buf` must point to at least `len` writable doubles.
 */
size_t riglab_pmf_copy(const struct RiglabPmf *p, double *buf, size_t len);

/**
 * # Safety
 * `p` must be a pmf handle from this library, freed at most once.
 */
void riglab_pmf_free(struct RiglabPmf *p);

/**
 * Total-variation distance between two pmfs after zero-padding to a common
 * length: `core` over the shared support, `upper` adds both residuals.
 *
 * # Safety
 * All pointers must be valid.
 */
enum RiglabStatus riglab_tv_distance(const struct RiglabPmf *a,
                                     const struct RiglabPmf *b,
                                     double *core,
                                     double *upper);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIGLAB_H */
