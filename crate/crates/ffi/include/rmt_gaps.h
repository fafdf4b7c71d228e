#ifndef RMT_GAPS_H
#define RMT_GAPS_H

/* C interface to the rmt-gaps gap-probability library.
 * Regenerate with: cbindgen --config cbindgen.toml --crate rmt-gaps-ffi --output include/rmt_gaps.h
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum RmtGapsStatus {
  RMT_GAPS_STATUS_OK = 0,
  RMT_GAPS_STATUS_INVALID_ARGUMENT = 1,
  RMT_GAPS_STATUS_DOMAIN_ERROR = 2,
  RMT_GAPS_STATUS_NUMERICAL_ERROR = 3,
} RmtGapsStatus;

#define RMT_GAPS_ENSEMBLE_HERMITE 0
#define RMT_GAPS_ENSEMBLE_JACOBI 1

#define RMT_GAPS_GEOMETRY_EXTERIOR 0
#define RMT_GAPS_GEOMETRY_JACOBI_EXTERIOR 1
#define RMT_GAPS_GEOMETRY_INTERIOR 2

/* Opaque evaluator handle (validated weight + reusable quadrature). */
typedef struct RmtGapsEvaluator RmtGapsEvaluator;

RmtGapsEvaluator *rmt_gaps_evaluator_new(int ensemble,
                                         double alpha,
                                         double beta,
                                         uint32_t n,
                                         uint32_t quad_order);

void rmt_gaps_evaluator_free(RmtGapsEvaluator *handle);

RmtGapsStatus rmt_gaps_gap_probability(const RmtGapsEvaluator *handle,
                                       int geometry,
                                       double s,
                                       double *out_value,
                                       double *out_est_error);

RmtGapsStatus rmt_gaps_ode_e2_grid(const RmtGapsEvaluator *handle,
                                   int geometry,
                                   const double *s_grid,
                                   size_t len,
                                   double *out_e2);

RmtGapsStatus rmt_gaps_closed_form_e2(int ensemble,
                                      double alpha,
                                      double beta,
                                      uint32_t n,
                                      int geometry,
                                      double s,
                                      double *out_value);

RmtGapsStatus rmt_gaps_mc_gap(int ensemble,
                              double alpha,
                              double beta,
                              uint32_t n,
                              int geometry,
                              double s,
                              size_t samples,
                              uint64_t seed,
                              double *out_p_hat,
                              double *out_stderr);

size_t rmt_gaps_last_error(char *buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* RMT_GAPS_H */
