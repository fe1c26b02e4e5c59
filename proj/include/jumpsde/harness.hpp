#pragma once

// Monte Carlo experiments: strong-error ladders against a fine-step
// reference, least-squares order fits, positivity counts and moment probes.
// Every experiment is a pure function of its inputs and the global seed:
// paths are evaluated independently (possibly on several threads) and
// reduced in path-index order.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jumpsde/model.hpp"
#include "jumpsde/solver.hpp"

namespace jumpsde {

enum class Scheme { Tjabem, Bem };

const char* to_string(Scheme scheme) noexcept;

struct RunConfig {
  std::size_t n_paths = 5000;
  std::uint64_t seed = 20240101;
  unsigned parallelism = 1;  // 0 = hardware concurrency
};

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares of log(error) on log(dt). Needs >= 2 points with distinct
// dt; throws Error(Domain) for a non-positive dt or error.
OrderFit fit_order(const std::vector<std::pair<double, double>>& dt_error);

struct LadderPoint {
  int M = 0;
  double dt = 0.0;
  double error_l1 = 0.0;  // mean |X_ref - X_dt|
  double stderr_l1 = 0.0;
  double error_l2 = 0.0;  // root mean square difference
};

struct ConvergenceReport {
  Scheme scheme = Scheme::Tjabem;
  std::vector<LadderPoint> points;  // coarsest first
  OrderFit fit;
  std::size_t n_paths = 0;
  int M_ref = 0;
  std::uint64_t seed = 0;
};

struct LadderSpec {
  std::vector<int> M_list;  // each must divide M_ref
  int M_ref = 4096;
};

// Strong errors at terminal time of each scheme against the transformed
// scheme run at M_ref on the same bundle. All schemes see identical paths.
// A failing path aborts the study with PathFailure(seed, path index).
std::vector<ConvergenceReport> strong_error_ladders(
    const ModelParams& params, const JumpCoefficient& h,
    const std::vector<Scheme>& schemes, const LadderSpec& ladder,
    const RunConfig& run, const SolverConfig& solver = {});

ConvergenceReport strong_error_ladder(const ModelParams& params,
                                      const JumpCoefficient& h, Scheme scheme,
                                      const LadderSpec& ladder,
                                      const RunConfig& run,
                                      const SolverConfig& solver = {});

// Soft check: number of adjacent ladder pairs where the error shrinks with dt.
int monotone_pairs(const ConvergenceReport& report);

struct NamedParams {
  std::string name;
  ModelParams params;
};

struct PositivityCell {
  std::string param_set;
  std::string h_family;
  double dt = 0.0;
  std::uint64_t n_values = 0;
  std::uint64_t n_nonpositive = 0;
  double percent = 0.0;
};

struct PositivityReport {
  std::vector<PositivityCell> cells;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

// Counts non-positive values among every post-jump X-space node value of
// every trajectory. `lambda` overrides each parameter set's intensity.
PositivityReport positivity_table(const std::vector<NamedParams>& sets,
                                  const std::vector<JumpCoefficient>& jumps,
                                  const std::vector<int>& M_list, double lambda,
                                  const RunConfig& run,
                                  const SolverConfig& solver = {});

struct MomentRow {
  double p = 0.0;
  double sup_mean = 0.0;  // E[max_k X_k^p]
  double sup_stderr = 0.0;
  double terminal_mean = 0.0;  // E[X_T^p]
  double terminal_stderr = 0.0;
};

struct MomentTable {
  std::vector<MomentRow> rows;
  int M = 0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

// Sample moments of the transformed scheme on the jump-adapted M-mesh.
// Negative p gives inverse moments. Throws Error(Validation) for a p the
// regime does not cover.
MomentTable moment_probe(const ModelParams& params, const JumpCoefficient& h,
                         int M, const std::vector<double>& p_list,
                         const RunConfig& run, const SolverConfig& solver = {});

}  // namespace jumpsde
