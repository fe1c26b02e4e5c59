/*
 * C interface to the jumpsde library: simulation of the Ait-Sahalia-type
 * short-rate model with Poisson jumps by the transformed jump-adapted
 * backward Euler scheme, plus the Monte Carlo experiment drivers.
 *
 * All objects are opaque handles created by jsde_*_create / _from_* and
 * released by the matching _destroy function (which accepts NULL). Every
 * fallible call returns a jsde_status; on failure a message is available
 * from jsde_last_error() on the calling thread until its next library call.
 */
#ifndef JUMPSDE_JUMPSDE_H
#define JUMPSDE_JUMPSDE_H

#include <stddef.h>
#include <stdint.h>

#if defined(JUMPSDE_BUILDING_LIBRARY)
#define JUMPSDE_API __attribute__((visibility("default")))
#else
#define JUMPSDE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jsde_status {
  JSDE_OK = 0,
  JSDE_ERR_INVALID_ARGUMENT = 1, /* null pointer or unknown enum value */
  JSDE_ERR_VALIDATION = 2,       /* model, jump or config failed a gate */
  JSDE_ERR_DOMAIN = 3,
  JSDE_ERR_RANGE = 4,
  JSDE_ERR_STEP_SIZE = 5,
  JSDE_ERR_SOLVER = 6,
  JSDE_ERR_MESH = 7,
  JSDE_ERR_CONFIG = 8,
  JSDE_ERR_IO = 9,
  JSDE_ERR_INTERNAL = 10
} jsde_status;

typedef enum jsde_function {
  JSDE_FN_DRIFT = 0,              /* f(x) */
  JSDE_FN_DIFFUSION = 1,          /* g(x) */
  JSDE_FN_TRANSFORMED_DRIFT = 2,  /* F(z) */
  JSDE_FN_TRANSFORMED_DRIFT_D1 = 3,
  JSDE_FN_TRANSFORMED_DRIFT_D2 = 4
} jsde_function;

typedef enum jsde_regime {
  JSDE_REGIME_SUPERCRITICAL = 0,
  JSDE_REGIME_CRITICAL = 1
} jsde_regime;

typedef struct jsde_model_params {
  double alpha_m1, alpha0, alpha1, alpha2, alpha3;
  double gamma, rho;
  double lambda;
  double x0, T;
} jsde_model_params;

typedef struct jsde_model jsde_model;
typedef struct jsde_jump jsde_jump;
typedef struct jsde_experiment jsde_experiment;
typedef struct jsde_text jsde_text;

JUMPSDE_API const char* jsde_version(void);
JUMPSDE_API const char* jsde_status_name(jsde_status status);
JUMPSDE_API const char* jsde_last_error(void);

/* Text results (reports, rendered configs). */
JUMPSDE_API const char* jsde_text_data(const jsde_text* text);
JUMPSDE_API size_t jsde_text_size(const jsde_text* text);
JUMPSDE_API void jsde_text_destroy(jsde_text* text);

/* Model. "set1" / "set2" fill the reference parameter sets (lambda = 0). */
JUMPSDE_API jsde_status jsde_model_preset(const char* name, jsde_model_params* out);
JUMPSDE_API jsde_status jsde_model_create(const jsde_model_params* params,
                                          jsde_model** out);
JUMPSDE_API void jsde_model_destroy(jsde_model* model);
JUMPSDE_API jsde_status jsde_model_eval(const jsde_model* model, jsde_function fn,
                                        double x, double* out);
/* One-sided Lipschitz constant of the transformed drift. */
JUMPSDE_API jsde_status jsde_model_q(const jsde_model* model, double* out);
/* *critical_cap is NaN in the supercritical regime. */
JUMPSDE_API jsde_status jsde_model_regime(const jsde_model* model,
                                          jsde_regime* regime, double* critical_cap);
/* Unique z > 0 with z - dt F(z) = rhs. */
JUMPSDE_API jsde_status jsde_implicit_step(const jsde_model* model, double rhs,
                                           double dt, double* z);

/* Jump coefficient from "linear:-0.5", "sine:1", "rational:0.3", "zero". */
JUMPSDE_API jsde_status jsde_jump_create(const char* spec, jsde_jump** out);
JUMPSDE_API void jsde_jump_destroy(jsde_jump* jump);
JUMPSDE_API jsde_status jsde_jump_eval(const jsde_jump* jump, double x, double* h,
                                       double* dh);
/* require_band != 0 also enforces the band assumption. Any out pointer may
 * be NULL. */
JUMPSDE_API jsde_status jsde_jump_bounds(const jsde_jump* jump, const jsde_model* model,
                                         int require_band, double* mu, double* r,
                                         double* mu1, double* mu2);

/* Terminal value of one transformed-scheme path on the jump-adapted M-mesh
 * generated from (seed, path_index). */
JUMPSDE_API jsde_status jsde_simulate_terminal(const jsde_model* model,
                                               const jsde_jump* jump, int M,
                                               uint64_t seed, uint64_t path_index,
                                               double* x_T);

/* Experiment configuration. Keys use "block.key", e.g. "model.lambda". */
JUMPSDE_API jsde_status jsde_experiment_from_preset(const char* name,
                                                    jsde_experiment** out);
JUMPSDE_API jsde_status jsde_experiment_from_file(const char* path,
                                                  jsde_experiment** out);
JUMPSDE_API jsde_status jsde_experiment_parse(const char* text, jsde_experiment** out);
JUMPSDE_API jsde_status jsde_experiment_set(jsde_experiment* exp, const char* key,
                                            const char* value);
JUMPSDE_API jsde_status jsde_experiment_render(const jsde_experiment* exp,
                                               jsde_text** out);
JUMPSDE_API void jsde_experiment_destroy(jsde_experiment* exp);

/* Commands. `report` receives a summary (may be NULL); for validation it is
 * produced even when the status is JSDE_ERR_VALIDATION. A NULL out_dir uses
 * the config's output directory. */
JUMPSDE_API jsde_status jsde_run_validate(const jsde_experiment* exp,
                                          jsde_text** report);
JUMPSDE_API jsde_status jsde_run_simulate(const jsde_experiment* exp,
                                          const char* out_file, jsde_text** report);
JUMPSDE_API jsde_status jsde_run_convergence(const jsde_experiment* exp,
                                             const char* out_dir, jsde_text** report);
JUMPSDE_API jsde_status jsde_run_positivity(const jsde_experiment* exp,
                                            const char* out_dir, jsde_text** report);
JUMPSDE_API jsde_status jsde_run_moments(const jsde_experiment* exp,
                                         const char* out_dir, jsde_text** report);

#ifdef __cplusplus
}
#endif

#endif /* JUMPSDE_JUMPSDE_H */
