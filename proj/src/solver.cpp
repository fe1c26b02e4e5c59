#include "jumpsde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "jumpsde/error.hpp"
#include "jumpsde/transform.hpp"

namespace jumpsde {

void SolverConfig::validate() const {
  if (!(residual_tol > 0.0)) {
    throw Error(ErrorKind::Config, "residual_tol must be positive");
  }
  if (max_iter < 1) throw Error(ErrorKind::Config, "max_iter must be >= 1");
  if (!(step_safety > 0.0 && step_safety < 1.0)) {
    throw Error(ErrorKind::Config, "step_safety must lie in (0, 1)");
  }
  if (!(bracket_lo_floor > 0.0)) {
    throw Error(ErrorKind::Config, "bracket_lo_floor must be positive");
  }
}

namespace {

void guard_step(double Q, double dt, const SolverConfig& cfg) {
  if (!(dt > 0.0)) {
    throw Error(ErrorKind::StepSize, fmt::format("step size must be positive, got {}", dt));
  }
  if (Q * dt > cfg.step_safety) {
    throw Error(ErrorKind::StepSize,
                fmt::format("Q*dt = {} exceeds step_safety = {}", Q * dt,
                            cfg.step_safety));
  }
}

}  // namespace

double solve_monotone_step(const std::function<double(double)>& drift,
                           const std::function<double(double)>& drift_derivative,
                           double rhs, double dt, double hint,
                           const SolverConfig& cfg) {
  // Residual G(z) - rhs. Competing overflowing powers give NaN; G tends to
  // -inf at 0+ and +inf at infinity, so NaN takes the sign of that limit.
  auto residual = [&](double z) {
    const double r = z - dt * drift(z) - rhs;
    if (!std::isnan(r)) return r;
    return z > 1.0 ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
  };
  const double tol = cfg.residual_tol * std::max(1.0, std::abs(rhs));
  const double max_z = std::numeric_limits<double>::max() / 16;

  if (!(hint > 0.0) || !std::isfinite(hint)) hint = std::max(1.0, std::abs(rhs));
  double lo = std::max(cfg.bracket_lo_floor, hint * 1e-3);
  double hi = std::max(hint * 1e3, 2.0 * cfg.bracket_lo_floor);
  double r_lo = residual(lo);
  while (r_lo > 0.0) {
    if (lo <= cfg.bracket_lo_floor) {
      throw Error(ErrorKind::Solver,
                  fmt::format("bracket expansion failed below z = {} (rhs = {})",
                              lo, rhs));
    }
    hi = lo;
    lo = std::max(cfg.bracket_lo_floor, lo * 1e-3);
    r_lo = residual(lo);
  }
  double r_hi = residual(hi);
  while (r_hi < 0.0) {
    if (hi >= max_z) {
      throw Error(ErrorKind::Solver,
                  fmt::format("bracket expansion failed above z = {} (rhs = {})",
                              hi, rhs));
    }
    lo = hi;
    r_lo = r_hi;
    hi = std::min(max_z, hi * 1e3);
    r_hi = residual(hi);
  }
  if (std::abs(r_lo) <= tol) return lo;
  if (std::abs(r_hi) <= tol) return hi;

  // Newton tends to land just inside the tolerance; one more step usually
  // takes the residual to rounding level.
  auto polish = [&](double z, double r) {
    const double next = z - r / (1.0 - dt * drift_derivative(z));
    if (!(next > 0.0) || !std::isfinite(next)) return z;
    return std::abs(residual(next)) < std::abs(r) ? next : z;
  };

  double z = std::clamp(hint, lo, hi);
  if (z == lo || z == hi) z = std::sqrt(lo) * std::sqrt(hi);
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double r = residual(z);
    if (std::abs(r) <= tol) return polish(z, r);
    if (r < 0.0) {
      lo = z;
    } else {
      hi = z;
    }
    const double slope = 1.0 - dt * drift_derivative(z);
    double next = z - r / slope;
    if (!(next > lo && next < hi)) {
      // Geometric midpoint while the bracket spans decades.
      next = hi > 4.0 * lo ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
    }
    if (next == z || next <= lo || next >= hi) {
      // Bracket exhausted at floating-point resolution.
      const double r_next = residual(next);
      if (std::abs(r_next) <= tol) return next;
      break;
    }
    z = next;
  }
  throw Error(ErrorKind::Solver,
              fmt::format("implicit step did not converge (rhs = {}, dt = {}, "
                          "bracket [{}, {}])",
                          rhs, dt, lo, hi));
}

double implicit_step_z(const ModelParams& params, double Q, double rhs, double dt,
                       const SolverConfig& cfg, double hint) {
  guard_step(Q, dt, cfg);
  return solve_monotone_step(
      [&](double z) { return transformed_drift(params, z); },
      [&](double z) { return transformed_drift_derivative(params, z); }, rhs, dt,
      hint, cfg);
}

double TrajectoryZ::x(std::size_t k, double rho) const {
  return lamperti_inverse(rho, z_post[k]);
}

TjabemResult tjabem_path(const ModelParams& params, const JumpCoefficient& h,
                         const JumpAdaptedMesh& mesh,
                         std::span<const double> increments, double Q,
                         const SolverConfig& cfg) {
  if (increments.size() != mesh.intervals()) {
    throw Error(ErrorKind::Mesh,
                fmt::format("{} increments for {} mesh intervals",
                            increments.size(), mesh.intervals()));
  }
  guard_step(Q, mesh.base_dt, cfg);

  TjabemResult out;
  TrajectoryZ& traj = out.trajectory;
  traj.mesh = mesh;
  const std::size_t n = mesh.nodes.size();
  traj.z_pre.resize(n);
  traj.z_post.resize(n);
  traj.z_pre[0] = traj.z_post[0] = lamperti_forward(params.rho, params.x0);

  const double noise_scale = (1.0 - params.rho) * params.alpha3;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double rhs = traj.z_post[k] + noise_scale * increments[k];
    const double z = implicit_step_z(params, Q, rhs, mesh.dt(k), cfg, traj.z_post[k]);
    traj.z_pre[k + 1] = z;
    traj.z_post[k + 1] = mesh.is_jump[k + 1] ? jump_map_z(params, h, z) : z;
  }
  out.x_T = lamperti_inverse(params.rho, traj.z_post.back());
  return out;
}

double bem_path(const ModelParams& params, const JumpCoefficient& h, int M,
                std::span<const double> dW, std::span<const int> dN, double Q_f,
                const SolverConfig& cfg) {
  if (M < 1 || dW.size() != static_cast<std::size_t>(M) ||
      dN.size() != static_cast<std::size_t>(M)) {
    throw Error(ErrorKind::Mesh,
                fmt::format("bem_path needs M = {} increments and jump counts", M));
  }
  const double dt = params.T / M;
  guard_step(Q_f, dt, cfg);
  auto f = [&](double x) { return drift_f(params, x); };
  auto df = [&](double x) { return drift_f_derivative(params, x); };

  double x = params.x0;
  for (int k = 0; k < M; ++k) {
    double rhs = x + diffusion_g(params, x) * dW[k];
    if (dN[k] != 0) rhs += h(x) * dN[k];
    x = solve_monotone_step(f, df, rhs, dt, x, cfg);
  }
  return x;
}

double max_diagnostic_epsilon(const ModelParams& params, double p) {
  const double a = (params.rho - 1.0) / (8.0 * params.rho * p);
  const double b = 2.0 * (params.gamma + 1.0 - 2.0 * params.rho) /
                   (3.0 * params.rho * (params.gamma - 1.0));
  return std::min(a, b);
}

StepSizeDiagnostics step_size_diagnostics(const ModelParams& params, double Q,
                                          double base_dt, double epsilon,
                                          double p) {
  if (classify_regime(params) != Regime::Supercritical) {
    throw Error(ErrorKind::Validation,
                "step-size diagnostics require gamma > 2*rho - 1");
  }
  if (!(p >= 1.0)) throw Error(ErrorKind::Domain, "diagnostics need p >= 1");
  const double eps_max = max_diagnostic_epsilon(params, p);
  if (!(epsilon > 0.0 && epsilon < eps_max)) {
    throw Error(ErrorKind::Domain,
                fmt::format("epsilon = {} outside (0, {})", epsilon, eps_max));
  }
  if (!(base_dt > 0.0)) throw Error(ErrorKind::Domain, "base_dt must be positive");

  const double rm1 = params.rho - 1.0;
  const double m = (params.gamma - params.rho) / rm1;
  StepSizeDiagnostics d;
  d.q_dt = Q * base_dt;
  d.m = m;
  d.epsilon = epsilon;

  // Compared in log space so that very small steps do not underflow.
  const double log_dt = std::log(base_dt);
  const double tail_rhs = std::pow(params.alpha2, 1.0 / m) /
                          (2.0 * rm1 * std::pow(params.alpha3, (m + 1.0) / m));
  d.tail_condition_ok = ((m - 1.0) / (2.0 * m) + epsilon) * log_dt <= std::log(tail_rhs);

  const double spread = rm1 * (params.alpha_m1 + params.alpha1);
  const double first = std::pow(params.alpha2 * rm1 / (2.0 * spread + 2.0 * Q),
                                1.0 / (m + 1.0));
  const double second = 1.0 / (2.0 + 4.0 * spread + 4.0 * Q);
  d.moment_condition_ok = epsilon * log_dt < std::log(std::min(first, second));
  return d;
}

}  // namespace jumpsde
