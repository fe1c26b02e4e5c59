#include "jumpsde/jumpsde.h"

#include <cmath>
#include <limits>
#include <new>
#include <string>

#include "jumpsde/config.hpp"
#include "jumpsde/error.hpp"
#include "jumpsde/experiments.hpp"
#include "jumpsde/model.hpp"
#include "jumpsde/paths.hpp"
#include "jumpsde/solver.hpp"

struct jsde_model {
  jumpsde::ModelParams params;
  double q = 0.0;
};

struct jsde_jump {
  jumpsde::JumpCoefficient h;
};

struct jsde_experiment {
  jumpsde::ExperimentConfig cfg;
};

struct jsde_text {
  std::string data;
};

namespace {

thread_local std::string g_last_error;

jsde_status status_for(jumpsde::ErrorKind kind) {
  using jumpsde::ErrorKind;
  switch (kind) {
    case ErrorKind::Domain: return JSDE_ERR_DOMAIN;
    case ErrorKind::Range: return JSDE_ERR_RANGE;
    case ErrorKind::Validation: return JSDE_ERR_VALIDATION;
    case ErrorKind::StepSize: return JSDE_ERR_STEP_SIZE;
    case ErrorKind::Solver: return JSDE_ERR_SOLVER;
    case ErrorKind::Mesh: return JSDE_ERR_MESH;
    case ErrorKind::Config: return JSDE_ERR_CONFIG;
    case ErrorKind::Io: return JSDE_ERR_IO;
  }
  return JSDE_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
jsde_status guarded(Body&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const jumpsde::Error& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return JSDE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return JSDE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return JSDE_ERR_INTERNAL;
  }
}

jsde_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return JSDE_ERR_INVALID_ARGUMENT;
}

void emit(jsde_text** out, std::string text) {
  if (out) *out = new jsde_text{std::move(text)};
}

jumpsde::ModelParams to_params(const jsde_model_params& p) {
  jumpsde::ModelParams m;
  m.alpha_m1 = p.alpha_m1;
  m.alpha0 = p.alpha0;
  m.alpha1 = p.alpha1;
  m.alpha2 = p.alpha2;
  m.alpha3 = p.alpha3;
  m.gamma = p.gamma;
  m.rho = p.rho;
  m.lambda = p.lambda;
  m.x0 = p.x0;
  m.T = p.T;
  return m;
}

std::filesystem::path out_dir_or_default(const jsde_experiment* exp, const char* dir) {
  return dir ? std::filesystem::path(dir) : std::filesystem::path(exp->cfg.out_dir);
}

}  // namespace

extern "C" {

const char* jsde_version(void) { return "0.1.0"; }

const char* jsde_status_name(jsde_status status) {
  switch (status) {
    case JSDE_OK: return "ok";
    case JSDE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case JSDE_ERR_VALIDATION: return "validation failure";
    case JSDE_ERR_DOMAIN: return "domain error";
    case JSDE_ERR_RANGE: return "range error";
    case JSDE_ERR_STEP_SIZE: return "step-size error";
    case JSDE_ERR_SOLVER: return "solver failure";
    case JSDE_ERR_MESH: return "mesh error";
    case JSDE_ERR_CONFIG: return "config error";
    case JSDE_ERR_IO: return "i/o error";
    case JSDE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* jsde_last_error(void) { return g_last_error.c_str(); }

const char* jsde_text_data(const jsde_text* text) { return text ? text->data.c_str() : ""; }
size_t jsde_text_size(const jsde_text* text) { return text ? text->data.size() : 0; }
void jsde_text_destroy(jsde_text* text) { delete text; }

jsde_status jsde_model_preset(const char* name, jsde_model_params* out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  return guarded([&] {
    const std::string n(name);
    jumpsde::ModelParams m;
    if (n == "set1") {
      m = jumpsde::parameter_set_one();
    } else if (n == "set2") {
      m = jumpsde::parameter_set_two();
    } else {
      throw jumpsde::Error(jumpsde::ErrorKind::Config, "unknown preset '" + n + "'");
    }
    *out = {m.alpha_m1, m.alpha0, m.alpha1, m.alpha2, m.alpha3,
            m.gamma,    m.rho,    m.lambda, m.x0,     m.T};
    return JSDE_OK;
  });
}

jsde_status jsde_model_create(const jsde_model_params* params, jsde_model** out) {
  if (!params) return null_argument("params");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const jumpsde::ModelParams m = to_params(*params);
    jumpsde::validate_params(m);
    *out = new jsde_model{m, jumpsde::compute_q(m)};
    return JSDE_OK;
  });
}

void jsde_model_destroy(jsde_model* model) { delete model; }

jsde_status jsde_model_eval(const jsde_model* model, jsde_function fn, double x,
                            double* out) {
  if (!model) return null_argument("model");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto& p = model->params;
    switch (fn) {
      case JSDE_FN_DRIFT: *out = jumpsde::drift_f(p, x); break;
      case JSDE_FN_DIFFUSION: *out = jumpsde::diffusion_g(p, x); break;
      case JSDE_FN_TRANSFORMED_DRIFT: *out = jumpsde::transformed_drift(p, x); break;
      case JSDE_FN_TRANSFORMED_DRIFT_D1:
        *out = jumpsde::transformed_drift_derivative(p, x);
        break;
      case JSDE_FN_TRANSFORMED_DRIFT_D2:
        *out = jumpsde::transformed_drift_second_derivative(p, x);
        break;
      default:
        g_last_error = "unknown jsde_function";
        return JSDE_ERR_INVALID_ARGUMENT;
    }
    return JSDE_OK;
  });
}

jsde_status jsde_model_q(const jsde_model* model, double* out) {
  if (!model) return null_argument("model");
  if (!out) return null_argument("out");
  *out = model->q;
  return JSDE_OK;
}

jsde_status jsde_model_regime(const jsde_model* model, jsde_regime* regime,
                              double* critical_cap) {
  if (!model) return null_argument("model");
  return guarded([&] {
    const auto check = jumpsde::validate_params(model->params);
    if (regime) {
      *regime = check.regime == jumpsde::Regime::Critical ? JSDE_REGIME_CRITICAL
                                                          : JSDE_REGIME_SUPERCRITICAL;
    }
    if (critical_cap) {
      *critical_cap =
          check.critical_moment_cap.value_or(std::numeric_limits<double>::quiet_NaN());
    }
    return JSDE_OK;
  });
}

jsde_status jsde_implicit_step(const jsde_model* model, double rhs, double dt,
                               double* z) {
  if (!model) return null_argument("model");
  if (!z) return null_argument("z");
  return guarded([&] {
    *z = jumpsde::implicit_step_z(model->params, model->q, rhs, dt, {});
    return JSDE_OK;
  });
}

jsde_status jsde_jump_create(const char* spec, jsde_jump** out) {
  if (!spec) return null_argument("spec");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new jsde_jump{jumpsde::JumpCoefficient::parse(spec)};
    return JSDE_OK;
  });
}

void jsde_jump_destroy(jsde_jump* jump) { delete jump; }

jsde_status jsde_jump_eval(const jsde_jump* jump, double x, double* h, double* dh) {
  if (!jump) return null_argument("jump");
  return guarded([&] {
    if (h) *h = jump->h(x);
    if (dh) *dh = jump->h.derivative(x);
    return JSDE_OK;
  });
}

jsde_status jsde_jump_bounds(const jsde_jump* jump, const jsde_model* model,
                             int require_band, double* mu, double* r, double* mu1,
                             double* mu2) {
  if (!jump) return null_argument("jump");
  if (!model) return null_argument("model");
  return guarded([&] {
    const auto b = jumpsde::validate_jump(
        jump->h, model->params,
        require_band ? jumpsde::JumpRequirement::GrowthAndBand
                     : jumpsde::JumpRequirement::GrowthOnly);
    if (mu) *mu = b.mu;
    if (r) *r = b.r;
    if (mu1) *mu1 = b.mu1;
    if (mu2) *mu2 = b.mu2;
    return JSDE_OK;
  });
}

jsde_status jsde_simulate_terminal(const jsde_model* model, const jsde_jump* jump,
                                   int M, uint64_t seed, uint64_t path_index,
                                   double* x_T) {
  if (!model) return null_argument("model");
  if (!jump) return null_argument("jump");
  if (!x_T) return null_argument("x_T");
  return guarded([&] {
    const auto bundle = jumpsde::generate_bundle(model->params, M, seed, path_index);
    *x_T = jumpsde::tjabem_path(model->params, jump->h, bundle.fine_mesh,
                                bundle.dW_fine, model->q, {})
               .x_T;
    return JSDE_OK;
  });
}

jsde_status jsde_experiment_from_preset(const char* name, jsde_experiment** out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new jsde_experiment{jumpsde::preset_config(name)};
    return JSDE_OK;
  });
}

jsde_status jsde_experiment_from_file(const char* path, jsde_experiment** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new jsde_experiment{jumpsde::load_config_file(path)};
    return JSDE_OK;
  });
}

jsde_status jsde_experiment_parse(const char* text, jsde_experiment** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new jsde_experiment{jumpsde::parse_config(text)};
    return JSDE_OK;
  });
}

jsde_status jsde_experiment_set(jsde_experiment* exp, const char* key,
                                const char* value) {
  if (!exp) return null_argument("exp");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] {
    // Stage the change so a rejected value leaves the config untouched.
    jumpsde::ExperimentConfig staged = exp->cfg;
    jumpsde::set_config_value(staged, key, value);
    exp->cfg = std::move(staged);
    return JSDE_OK;
  });
}

jsde_status jsde_experiment_render(const jsde_experiment* exp, jsde_text** out) {
  if (!exp) return null_argument("exp");
  if (!out) return null_argument("out");
  return guarded([&] {
    emit(out, jumpsde::render_config(jumpsde::resolve_fast_mode(exp->cfg)));
    return JSDE_OK;
  });
}

void jsde_experiment_destroy(jsde_experiment* exp) { delete exp; }

jsde_status jsde_run_validate(const jsde_experiment* exp, jsde_text** report) {
  if (!exp) return null_argument("exp");
  return guarded([&] {
    const auto outcome = jumpsde::run_validate(jumpsde::resolve_fast_mode(exp->cfg));
    emit(report, outcome.text);
    if (!outcome.ok) {
      g_last_error = outcome.failed_gate;
      return JSDE_ERR_VALIDATION;
    }
    return JSDE_OK;
  });
}

jsde_status jsde_run_simulate(const jsde_experiment* exp, const char* out_file,
                              jsde_text** report) {
  if (!exp) return null_argument("exp");
  return guarded([&] {
    const auto cfg = jumpsde::resolve_fast_mode(exp->cfg);
    const std::filesystem::path file =
        out_file ? std::filesystem::path(out_file)
                 : std::filesystem::path(cfg.out_dir) /
                       ("trajectory_" + std::to_string(cfg.simulate_path_index) + ".csv");
    emit(report, jumpsde::run_simulate(cfg, file).text);
    return JSDE_OK;
  });
}

jsde_status jsde_run_convergence(const jsde_experiment* exp, const char* out_dir,
                                 jsde_text** report) {
  if (!exp) return null_argument("exp");
  return guarded([&] {
    emit(report, jumpsde::run_convergence(jumpsde::resolve_fast_mode(exp->cfg),
                                          out_dir_or_default(exp, out_dir))
                     .text);
    return JSDE_OK;
  });
}

jsde_status jsde_run_positivity(const jsde_experiment* exp, const char* out_dir,
                                jsde_text** report) {
  if (!exp) return null_argument("exp");
  return guarded([&] {
    emit(report, jumpsde::run_positivity(jumpsde::resolve_fast_mode(exp->cfg),
                                         out_dir_or_default(exp, out_dir))
                     .text);
    return JSDE_OK;
  });
}

jsde_status jsde_run_moments(const jsde_experiment* exp, const char* out_dir,
                             jsde_text** report) {
  if (!exp) return null_argument("exp");
  return guarded([&] {
    emit(report, jumpsde::run_moments(jumpsde::resolve_fast_mode(exp->cfg),
                                      out_dir_or_default(exp, out_dir))
                     .text);
    return JSDE_OK;
  });
}

}  // extern "C"
