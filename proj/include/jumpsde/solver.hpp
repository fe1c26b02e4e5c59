#pragma once

#include <functional>
#include <span>
#include <vector>

#include "jumpsde/mesh.hpp"
#include "jumpsde/model.hpp"

namespace jumpsde {

struct SolverConfig {
  double residual_tol = 1e-12;  // relative to max(1, |rhs|)
  int max_iter = 200;
  double step_safety = 0.5;  // required bound on Q * dt, in (0, 1)
  double bracket_lo_floor = 1e-300;

  // Throws Error(Config) when a field is out of range.
  void validate() const;
};

// Solves G(z) = z - dt * drift(z) = rhs for z > 0, where G is strictly
// increasing from -inf (z -> 0+) to +inf. Bracketed Newton with bisection
// fallback, starting from `hint`. Throws Error(Solver) on failure.
double solve_monotone_step(const std::function<double(double)>& drift,
                           const std::function<double(double)>& drift_derivative,
                           double rhs, double dt, double hint,
                           const SolverConfig& cfg);

// One implicit Z-space step: the unique z > 0 with z - dt F(z) = rhs.
// Throws Error(StepSize) if Q * dt > cfg.step_safety.
double implicit_step_z(const ModelParams& params, double Q, double rhs, double dt,
                       const SolverConfig& cfg, double hint = 1.0);

// Left limits and post-jump values of the transformed scheme at every mesh
// node. z_post[k] == z_pre[k] wherever the node carries no jump.
struct TrajectoryZ {
  JumpAdaptedMesh mesh;
  std::vector<double> z_pre;
  std::vector<double> z_post;

  // X-space value after the jump at node k.
  double x(std::size_t k, double rho) const;
};

struct TjabemResult {
  TrajectoryZ trajectory;
  double x_T = 0.0;
};

// Transformed jump-adapted backward Euler on `mesh` with one Brownian
// increment per interval. Throws Error(StepSize) if Q * mesh.base_dt exceeds
// cfg.step_safety, Error(Mesh) on misaligned increments.
TjabemResult tjabem_path(const ModelParams& params, const JumpCoefficient& h,
                         const JumpAdaptedMesh& mesh,
                         std::span<const double> increments, double Q,
                         const SolverConfig& cfg);

// Drift-implicit backward Euler in X-space on the uniform M-grid:
//   X_{k+1} - dt f(X_{k+1}) = X_k + g(X_k) dW_k + h(X_k) dN_k.
// Q_f bounds f' from above and guards the step like Q does for Z-space.
double bem_path(const ModelParams& params, const JumpCoefficient& h, int M,
                std::span<const double> dW, std::span<const int> dN, double Q_f,
                const SolverConfig& cfg);

// Advisory step-size conditions behind the inverse-moment bounds. Both are
// sufficient conditions only; stepping is gated on Q * dt alone.
struct StepSizeDiagnostics {
  double q_dt = 0.0;
  double m = 0.0;  // (gamma - rho) / (rho - 1)
  double epsilon = 0.0;
  bool tail_condition_ok = false;    // dt^((m-1)/(2m)+eps) <= a2^(1/m) / (2 (rho-1) a3^((m+1)/m))
  bool moment_condition_ok = false;  // dt^eps below the Q-dependent threshold
};

// Admissible epsilon range is (0, min((rho-1)/(8 rho p), 2(gamma+1-2rho)/(3 rho (gamma-1)))).
double max_diagnostic_epsilon(const ModelParams& params, double p = 1.0);

// Throws Error(Validation) outside the Supercritical regime and
// Error(Domain) for epsilon outside the admissible interval.
StepSizeDiagnostics step_size_diagnostics(const ModelParams& params, double Q,
                                          double base_dt, double epsilon,
                                          double p = 1.0);

}  // namespace jumpsde
