#ifndef SKT_FFI_H
#define SKT_FFI_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result of every fallible call.
 */
typedef enum SktStatus {
  SKT_STATUS_OK = 0,
  SKT_STATUS_NULL_ARGUMENT = 1,
  SKT_STATUS_INVALID_UTF8 = 2,
  SKT_STATUS_DIMENSION = 3,
  SKT_STATUS_DEGREE = 4,
  SKT_STATUS_DEFINITENESS = 5,
  SKT_STATUS_INVARIANT = 6,
  SKT_STATUS_DOMAIN = 7,
  SKT_STATUS_CONSISTENCY = 8,
  SKT_STATUS_LOOKUP = 9,
  SKT_STATUS_INTEGRABILITY = 10,
  SKT_STATUS_CONSTRUCTION = 11,
  SKT_STATUS_PRECONDITION = 12,
  SKT_STATUS_SYNTAX = 13,
  SKT_STATUS_PANIC = 14,
} SktStatus;

typedef enum SktAlphaRoute {
  SKT_ALPHA_ROUTE_DEFINITIONAL = 0,
  SKT_ALPHA_ROUTE_LAMBDA = 1,
  SKT_ALPHA_ROUTE_CLOSED = 2,
} SktAlphaRoute;

typedef enum SktVerdict {
  SKT_VERDICT_NEGATIVE = -1,
  SKT_VERDICT_ZERO = 0,
  SKT_VERDICT_POSITIVE = 1,
} SktVerdict;

typedef enum SktCondition {
  SKT_CONDITION_TWO_SKT = 0,
  SKT_CONDITION_K_SKT = 1,
  SKT_CONDITION_K_SKT_KAHLER = 2,
  SKT_CONDITION_K_PLUS_ONE_SKT = 3,
} SktCondition;

/*
 Opaque model handle.
 */
typedef struct SktModel SktModel;

/*
 Scalar torsion invariants of a model.
 */
typedef struct SktTorsion {
  double norm_h_sq;
  double norm_theta_sq;
  double delta_theta;
  double lambda_trace;
  double norm_c_sq;
} SktTorsion;

typedef struct SktMargin {
  double margin;
  double chern_expression;
  double b_hat;
  enum SktVerdict verdict;
} SktMargin;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next call into this library on the same thread.
 */
const char *skt_last_error_message(void);

/*
 Library version as a static string.
 */
const char *skt_version(void);

/*
 Parses a model document. On success `*out` owns a new handle.

 # Safety
 `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum SktStatus skt_model_from_text(const char *text, struct SktModel **out);

/*
 Builds a catalog entry; `params` is `key=value` pairs separated by commas, or null.
 Twist entries yield the twisted model.

 # Safety
 `name` and (if non-null) `params` must be nul-terminated strings; `out` writable.
 */
enum SktStatus skt_model_from_catalog(const char *name, const char *params, struct SktModel **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `model` must come from this library and not be used afterwards.
 */
void skt_model_free(struct SktModel *model);

/*
 Complex dimension `n` (the real dimension is `2n`).

 # Safety
 `model` must be a live handle and `n` writable.
 */
enum SktStatus skt_model_complex_dim(const struct SktModel *model, size_t *n);

/*
 # Safety
 `model` must be a live handle and `torsion` writable.
 */
enum SktStatus skt_model_torsion(const struct SktModel *model, struct SktTorsion *torsion);

/*
 `α_k` on one route. The lambda and closed routes need `n ≥ 3`.

 # Safety
 `model` must be a live handle and `value` writable.
 */
enum SktStatus skt_model_alpha(const struct SktModel *model,
                               size_t k,
                               enum SktAlphaRoute route,
                               double *value);

/*
 Whether `ω^l ∧ d(ω^{k-1} ∧ H) = 0` at the default tolerance.

 # Safety
 `model` must be a live handle and `holds` writable.
 */
enum SktStatus skt_model_is_lk_skt(const struct SktModel *model, size_t l, size_t k, bool *holds);

/*
 Vanishing margin at level `k`; needs `n > 2`.

 # Safety
 `model` must be a live handle and `margin` writable.
 */
enum SktStatus skt_model_margin(const struct SktModel *model, size_t k, struct SktMargin *margin);

/*
 Serializes the model in the text format. Free the result with `skt_string_free`.

 # Safety
 `model` must be a live handle and `text` writable.
 */
enum SktStatus skt_model_to_text(const struct SktModel *model, char **text);

/*
 # Safety
 `s` must come from this library and not be used afterwards; null is ignored.
 */
void skt_string_free(char *s);

/*
 Exact integer check of a torus-bundle SKT condition for
 `β⁻¹ = [[p1, q1], [p2, q2]]`.

 # Safety
 `satisfied` must be writable.
 */
enum SktStatus skt_diophantine_check(enum SktCondition condition,
                                     uint32_t k,
                                     int64_t p1,
                                     int64_t p2,
                                     int64_t q1,
                                     int64_t q2,
                                     bool null_f1,
                                     bool null_f2,
                                     bool *satisfied);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SKT_FFI_H */
