#ifndef TINF_H
#define TINF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum TinfStatus {
  TINF_STATUS_OK = 0,
  TINF_STATUS_NULL_POINTER = 1,
  /*
   An argument is outside the operation's domain.
   */
  TINF_STATUS_DOMAIN = 2,
  /*
   A root finder failed to converge.
   */
  TINF_STATUS_SOLVER = 3,
  TINF_STATUS_CONFIG = 4,
  TINF_STATUS_UNSUPPORTED = 5,
  /*
   A caller-provided buffer has the wrong length.
   */
  TINF_STATUS_BUFFER_SIZE = 6,
  /*
   Internal error; the message has details.
   */
  TINF_STATUS_PANIC = 7,
} TinfStatus;

typedef enum TinfEstimator {
  TINF_ESTIMATOR_REDUCED_VARIANCE = 0,
  TINF_ESTIMATOR_IMPORTANCE_WEIGHTED = 1,
} TinfEstimator;

/*
 Which analysis a bound comes from.
 */
typedef enum TinfTheorem {
  /*
   The original Tsallis-INF analysis.
   */
  TINF_THEOREM_ORIGINAL = 1,
  /*
   The refined Tsallis-INF analysis.
   */
  TINF_THEOREM_REFINED = 2,
  /*
   Any algorithm satisfying the square-root condition with constants `b`, `d`.
   */
  TINF_THEOREM_SQRT_CONDITION = 3,
} TinfTheorem;

/*
 Opaque learner handle.
 */
typedef struct TinfLearner TinfLearner;

/*
 Inputs of a bound evaluation.
 */
typedef struct TinfBoundParams {
  size_t arms;
  uint64_t horizon;
  /*
   `arms` gaps with a zero for the best arm, or NULL when unknown.
   */
  const double *gaps;
  double corruption;
  /*
   When true, `b` and `d` are ignored and the Tsallis-INF constants are used.
   */
  bool tsallis_constants;
  double b;
  double d;
} TinfBoundParams;

typedef struct TinfBound {
  /*
   NaN when the bound cannot be evaluated at all.
   */
  double value;
  bool valid;
} TinfBound;

typedef struct TinfBoundSet {
  struct TinfBound adversarial;
  struct TinfBound self_bounding;
  struct TinfBound large_corruption;
} TinfBoundSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *tinf_last_error_message(void);

/*
 Creates a learner over `arms` arms whose draws are keyed by `seed`.

 # Safety
 `out` must be a valid pointer to writable storage for one handle.
 */
enum TinfStatus tinf_learner_new(size_t arms,
                                 enum TinfEstimator estimator,
                                 uint64_t seed,
                                 struct TinfLearner **out);

/*
 Releases a learner. NULL is ignored.

 # Safety
 `learner` must come from [`tinf_learner_new`] and not be used afterwards.
 */
void tinf_learner_free(struct TinfLearner *learner);

/*
 Plays one round against `losses` (length `arms`, entries in [0, 1]) and
 writes the chosen arm to `out_arm`.

 # Safety
 `learner` must be a live handle, `losses` must point to `len` doubles
 and `out_arm` to writable storage.
 */
enum TinfStatus tinf_learner_step(struct TinfLearner *learner,
                                  const double *losses,
                                  size_t len,
                                  size_t *out_arm);

/*
 Writes the distribution the learner will play next into `out` (length `arms`).

 # Safety
 `learner` must be a live handle and `out` must point to `len` writable doubles.
 */
enum TinfStatus tinf_learner_weights(const struct TinfLearner *learner, double *out, size_t len);

/*
 Current round (1 before the first step), or 0 for NULL.

 # Safety
 `learner` must be NULL or a live handle.
 */
uint64_t tinf_learner_round(const struct TinfLearner *learner);

/*
 Tsallis-INF weights for cumulative loss estimates at learning rate `eta`.

 # Safety
 `estimates` must point to `len` doubles and `out` to `len` writable doubles.
 */
enum TinfStatus tinf_tsallis_weights(const double *estimates, size_t len, double eta, double *out);

/*
 Evaluates the three bounds of `theorem`. Bounds outside their
 preconditions are reported with `valid = false`.

 # Safety
 `params` must be valid, its `gaps` NULL or pointing to `arms` doubles,
 and `out` writable.
 */
enum TinfStatus tinf_bounds(enum TinfTheorem theorem,
                            const struct TinfBoundParams *params,
                            struct TinfBoundSet *out);

/*
 Lower real branch of the Lambert W function for `y` in `[-1/e, 0)`.

 # Safety
 `out` must be writable.
 */
enum TinfStatus tinf_lambert_w_minus1(double y, double *out);

/*
 Optimal trade-off parameter of the large-corruption analysis and the
 Lambert term `w`; `c` must lie in the bound's validity range.

 # Safety
 `out_alpha` and `out_w` must be writable.
 */
enum TinfStatus tinf_alpha_star(double s,
                                double c,
                                size_t arms,
                                uint64_t horizon,
                                double b,
                                double *out_alpha,
                                double *out_w);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TINF_H */
