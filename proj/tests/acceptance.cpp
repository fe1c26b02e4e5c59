// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Tolerances are fixed here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "jumpsde/config.hpp"
#include "jumpsde/error.hpp"
#include "jumpsde/experiments.hpp"
#include "jumpsde/harness.hpp"
#include "jumpsde/paths.hpp"
#include "jumpsde/solver.hpp"
#include "jumpsde/transform.hpp"

using namespace jumpsde;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

ModelParams with_lambda(ModelParams p, double lambda) {
  p.lambda = lambda;
  return p;
}

RunConfig paths(std::size_t n) {
  RunConfig run;
  run.n_paths = n;
  run.parallelism = 0;
  return run;
}

// 1. Zero non-positive values in every cell of the positivity table.
Outcome positivity() {
  const std::vector<NamedParams> sets{{"set1", parameter_set_one()},
                                      {"set2", parameter_set_two()}};
  const std::vector<JumpCoefficient> jumps{JumpCoefficient::linear(-0.5),
                                           JumpCoefficient::linear(0.5),
                                           JumpCoefficient::sine(1.0)};
  const auto report = positivity_table(sets, jumps, {32, 64, 128}, 1.0, paths(1000));
  std::uint64_t values = 0, bad = 0;
  for (const auto& c : report.cells) {
    values += c.n_values;
    bad += c.n_nonpositive;
  }
  return {report.cells.size() == 18 && bad == 0,
          fmt::format("{} cells, {} values, {} non-positive", report.cells.size(), values,
                      bad)};
}

// 2. First-order TJABEM on both parameter sets.
Outcome tjabem_order() {
  Outcome out{true, ""};
  for (const auto& [name, base] : {std::pair{"set1", parameter_set_one()},
                                   std::pair{"set2", parameter_set_two()}}) {
    const auto r = strong_error_ladder(with_lambda(base, 1.0), JumpCoefficient::linear(-0.5),
                                       Scheme::Tjabem, {{32, 64, 128, 256, 512}, 4096},
                                       paths(1000));
    const bool ok = r.fit.slope >= 0.85 && r.fit.slope <= 1.15 && r.fit.r2 >= 0.98;
    out.pass = out.pass && ok;
    out.detail += fmt::format("{}{}: slope {:.4f} r2 {:.4f}", out.detail.empty() ? "" : "; ",
                              name, r.fit.slope, r.fit.r2);
  }
  out.detail += " (need slope in [0.85, 1.15], r2 >= 0.98)";
  return out;
}

// 3. TJABEM against BEM on shared bundles, h(x) = x, lambda = 5.
Outcome scheme_comparison() {
  const auto reports = strong_error_ladders(
      with_lambda(parameter_set_one(), 5.0), JumpCoefficient::linear(1.0),
      {Scheme::Tjabem, Scheme::Bem}, {{64, 128, 256, 512, 1024}, 8192}, paths(1000));
  const double t = reports[0].fit.slope;
  const double b = reports[1].fit.slope;
  const bool ok = t >= 0.85 && t <= 1.15 && b >= 0.35 && b <= 0.65 && t - b >= 0.3;
  return {ok, fmt::format("tjabem {:.4f} in [0.85, 1.15], bem {:.4f} in [0.35, 0.65], "
                          "difference {:.4f} >= 0.3",
                          t, b, t - b)};
}

// 4. Residual, positivity and monotonicity of 1e5 random implicit solves.
Outcome solver_property() {
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> rhs_dist(-10.0, 10.0);
  const ModelParams sets[] = {parameter_set_one(), parameter_set_two()};
  const SolverConfig cfg;
  std::size_t solves = 0, residual_fail = 0, sign_fail = 0, order_fail = 0;
  double worst = 0.0;
  for (const auto& p : sets) {
    const double Q = compute_q(p);
    for (int e = 5; e <= 12; ++e) {
      const double dt = std::ldexp(1.0, -e);
      std::vector<double> rhs(6250);
      for (double& r : rhs) r = rhs_dist(rng);
      std::sort(rhs.begin(), rhs.end());
      double prev = 0.0;
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double z = implicit_step_z(p, Q, rhs[i], dt, cfg);
        ++solves;
        const double res = std::abs(z - dt * transformed_drift(p, z) - rhs[i]) /
                           std::max(1.0, std::abs(rhs[i]));
        worst = std::max(worst, res);
        if (res > 1e-12) ++residual_fail;
        if (!(z > 0.0)) ++sign_fail;
        if (i > 0 && rhs[i] > rhs[i - 1] && !(z > prev)) ++order_fail;
        prev = z;
      }
    }
  }
  return {solves == 100000 && residual_fail + sign_fail + order_fail == 0,
          fmt::format("{} solves, worst scaled residual {:.2e} <= 1e-12, {} non-positive, "
                      "{} monotonicity breaks",
                      solves, worst, sign_fail, order_fail)};
}

// 5. Closed forms against finite differences and the Ito identity.
Outcome formula_oracles() {
  double worst_fd = 0.0, worst_ito = 0.0;
  for (const auto& p : {parameter_set_one(), parameter_set_two()}) {
    for (double z : {0.05, 0.2, 0.5, 0.9, 1.0, 1.3, 2.0, 5.0, 25.0}) {
      const double h = 1e-5 * z;
      const double d1 = (transformed_drift(p, z + h) - transformed_drift(p, z - h)) / (2 * h);
      const double d2 = (transformed_drift_derivative(p, z + h) -
                         transformed_drift_derivative(p, z - h)) /
                        (2 * h);
      worst_fd = std::max(worst_fd, std::abs(transformed_drift_derivative(p, z) / d1 - 1));
      worst_fd = std::max(worst_fd,
                          std::abs(transformed_drift_second_derivative(p, z) / d2 - 1));
    }
    for (double x : {0.05, 0.3, 1.0, 2.5, 10.0}) {
      const double u1 = (1 - p.rho) * std::pow(x, -p.rho);
      const double u2 = -p.rho * (1 - p.rho) * std::pow(x, -p.rho - 1);
      const double g = diffusion_g(p, x);
      const double ito = u1 * drift_f(p, x) + 0.5 * u2 * g * g;
      worst_ito = std::max(
          worst_ito, std::abs(transformed_drift(p, std::pow(x, 1 - p.rho)) / ito - 1));
    }
  }
  const double q = compute_q(parameter_set_one());
  const double m = step_size_diagnostics(parameter_set_one(), q, 1.0 / 32, 0.01).m;
  return {worst_fd <= 1e-5 && worst_ito <= 1e-9 && q == 0.0 && m == 3.0,
          fmt::format("finite-difference rel err {:.2e} <= 1e-5, Ito rel err {:.2e} <= 1e-9, "
                      "Q(set1) = {}, m(set1) = {}",
                      worst_fd, worst_ito, q, m)};
}

// 6. Mesh and coupling invariants on 1e4 random bundles.
Outcome coupling_invariants() {
  const double lambdas[] = {0.0, 1.0, 5.0};
  const int M_ref = 256;
  const int coarse_M[] = {8, 32, 128};
  std::size_t bundles = 0, failures = 0;
  double worst_sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = with_lambda(parameter_set_one(), lambdas[i % 3]);
    const auto bundle = generate_bundle(p, M_ref, 777, static_cast<std::uint64_t>(i));
    ++bundles;
    const auto& fine = bundle.fine_mesh;
    bool ok = fine.nodes.size() == static_cast<std::size_t>(M_ref) + 1 +
                                       bundle.jump_times.size();
    for (std::size_t k = 0; k < fine.intervals(); ++k) {
      ok = ok && fine.dt(k) > 0.0 && fine.dt(k) <= fine.base_dt * (1 + 1e-12);
    }
    for (int M : coarse_M) {
      const auto coarse = coarsen_increments(bundle, M);
      for (std::size_t k = 0; k < coarse.mesh.intervals(); ++k) {
        ok = ok && coarse.mesh.dt(k) <= coarse.mesh.base_dt * (1 + 1e-12);
      }
      // Every coarse node is a fine node with the same jump flag, and each
      // coarse increment is the sum of the fine increments it covers.
      std::size_t f = 0;
      for (std::size_t k = 0; k < coarse.mesh.nodes.size(); ++k) {
        const double t = coarse.mesh.nodes[k];
        while (f < fine.nodes.size() && fine.nodes[f] < t) ++f;
        if (f == fine.nodes.size() || fine.nodes[f] != t ||
            fine.is_jump[f] != coarse.mesh.is_jump[k]) {
          ok = false;
          break;
        }
        if (k + 1 < coarse.mesh.nodes.size()) {
          double sum = 0.0;
          std::size_t g = f;
          while (g < fine.intervals() && fine.nodes[g] < coarse.mesh.nodes[k + 1]) {
            sum += bundle.dW_fine[g++];
          }
          const double diff = std::abs(sum - coarse.dW[k]);
          worst_sum = std::max(worst_sum, diff);
          ok = ok && diff <= 1e-14;
        }
      }
    }
    if (!ok) ++failures;
  }
  return {failures == 0,
          fmt::format("{} bundles (lambda 0/1/5, M_ref {} -> 8/32/128), {} violations, "
                      "worst telescoping gap {:.1e} <= 1e-14",
                      bundles, M_ref, failures, worst_sum)};
}

// Lamperti backward Euler without jumps, written out directly: Newton on
// G(z) = z - dt F(z) - rhs with a bisection fallback.
double direct_lamperti_bem(const ModelParams& p, int M, const std::vector<double>& dW) {
  const double dt = p.T / M;
  double z = std::pow(p.x0, 1 - p.rho);
  for (int k = 0; k < M; ++k) {
    const double rhs = z + (1 - p.rho) * p.alpha3 * dW[k];
    double lo = 1e-300, hi = std::max(1.0, 2 * std::abs(rhs) + 1);
    while (hi - dt * transformed_drift(p, hi) - rhs < 0) hi *= 2;
    double y = z;
    for (int it = 0; it < 300; ++it) {
      const double G = y - dt * transformed_drift(p, y) - rhs;
      if (std::abs(G) <= 1e-15 * std::max(1.0, std::abs(rhs))) break;
      (G < 0 ? lo : hi) = y;
      const double step = y - G / (1 - dt * transformed_drift_derivative(p, y));
      y = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
    }
    z = y;
  }
  return std::pow(z, 1 / (1 - p.rho));
}

// 7. Degenerations: no jumps reduces to plain Lamperti BEM; h = 0 is neutral.
Outcome degeneration() {
  double worst_direct = 0.0, worst_neutral = 0.0;
  const SolverConfig cfg;
  for (const auto& base : {parameter_set_one(), parameter_set_two()}) {
    const auto p = with_lambda(base, 0.0);
    for (std::uint64_t i = 0; i < 500; ++i) {
      const auto bundle = generate_bundle(p, 64, 31, i);
      const auto r = tjabem_path(p, JumpCoefficient::zero(), bundle.fine_mesh,
                                 bundle.dW_fine, 0.0, cfg);
      const double direct = direct_lamperti_bem(p, 64, bundle.dW_fine);
      worst_direct = std::max(worst_direct, std::abs(r.x_T - direct) / std::max(1.0, direct));
    }
    const auto q = with_lambda(base, 5.0);
    for (std::uint64_t i = 0; i < 500; ++i) {
      const auto bundle = generate_bundle(q, 64, 32, i);
      auto flagless = bundle.fine_mesh;
      std::fill(flagless.is_jump.begin(), flagless.is_jump.end(), 0);
      const auto with = tjabem_path(q, JumpCoefficient::zero(), bundle.fine_mesh,
                                    bundle.dW_fine, 0.0, cfg);
      const auto without =
          tjabem_path(q, JumpCoefficient::zero(), flagless, bundle.dW_fine, 0.0, cfg);
      for (std::size_t k = 0; k < with.trajectory.z_post.size(); ++k) {
        worst_neutral = std::max(
            worst_neutral, std::abs(with.trajectory.z_post[k] - without.trajectory.z_post[k]));
      }
    }
  }
  return {worst_direct <= 1e-10 && worst_neutral <= 1e-12,
          fmt::format("lambda = 0 vs direct Lamperti BEM max gap {:.2e} <= 1e-10; "
                      "h = 0 jump nodes max gap {:.2e} <= 1e-12",
                      worst_direct, worst_neutral)};
}

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8. Byte-identical report files at parallelism 1 and 8.
Outcome reproducibility() {
  const auto root = std::filesystem::temp_directory_path() /
                    fmt::format("jumpsde_repro_{}", std::random_device{}());
  auto cfg = preset_config("set1");
  cfg.model.lambda = 5.0;
  cfg.jump = "linear:1";
  cfg.scheme = SchemeChoice::Both;
  cfg.ladder = {{16, 32, 64}, 512};
  cfg.positivity_M_list = {32};
  cfg.moments_M = 64;
  cfg.run.n_paths = 300;
  std::vector<std::vector<std::string>> contents;
  for (unsigned threads : {1u, 8u}) {
    cfg.run.parallelism = threads;
    const auto dir = root / std::to_string(threads);
    std::vector<std::filesystem::path> files;
    for (const auto& outcome : {run_convergence(cfg, dir), run_positivity(cfg, dir),
                                run_moments(cfg, dir),
                                run_simulate(cfg, dir / "trajectory.csv")}) {
      files.insert(files.end(), outcome.files.begin(), outcome.files.end());
    }
    std::vector<std::string> texts;
    for (const auto& f : files) texts.push_back(f.filename().string() + "\n" + slurp(f));
    contents.push_back(texts);
  }
  std::filesystem::remove_all(root);
  const bool same = contents[0] == contents[1];
  return {same && !contents[0].empty(),
          fmt::format("{} report files compared, {}", contents[0].size(),
                      same ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"positivity", positivity},
      {"tjabem order", tjabem_order},
      {"scheme comparison", scheme_comparison},
      {"solver property", solver_property},
      {"formula oracles", formula_oracles},
      {"coupling/mesh", coupling_invariants},
      {"degeneration", degeneration},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", index, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
