#include "jumpsde/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "jumpsde/error.hpp"
#include "jumpsde/paths.hpp"
#include "jumpsde/transform.hpp"
#include "parallel.hpp"

namespace jumpsde {

namespace {

struct MeanAndError {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Sequential, index-ordered accumulation.
MeanAndError mean_and_stderr(const std::vector<double>& samples) {
  MeanAndError out;
  const double n = static_cast<double>(samples.size());
  if (samples.empty()) return out;
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.mean = sum / n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

template <typename Fn>
void run_paths(std::size_t n_paths, const RunConfig& run, Fn&& fn) {
  auto [index, failure] = detail::for_each_index(n_paths, run.parallelism, fn);
  if (!failure) return;
  try {
    std::rethrow_exception(failure);
  } catch (const Error& e) {
    throw PathFailure(e.kind(), run.seed, index, e.what());
  } catch (const std::exception& e) {
    throw PathFailure(ErrorKind::Solver, run.seed, index, e.what());
  }
}

void require_paths(const RunConfig& run) {
  if (run.n_paths < 2) {
    throw Error(ErrorKind::Config, "Monte Carlo runs need at least 2 paths");
  }
}

}  // namespace

const char* to_string(Scheme scheme) noexcept {
  return scheme == Scheme::Tjabem ? "tjabem" : "bem";
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& dt_error) {
  if (dt_error.size() < 2) {
    throw Error(ErrorKind::Domain, "order fit needs at least two points");
  }
  const double n = static_cast<double>(dt_error.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [dt, err] : dt_error) {
    if (!(dt > 0.0) || !(err > 0.0)) {
      throw Error(ErrorKind::Domain,
                  fmt::format("order fit needs positive dt and error, got ({}, {})",
                              dt, err));
    }
    sx += std::log(dt);
    sy += std::log(err);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [dt, err] : dt_error) {
    const double dx = std::log(dt) - mx;
    const double dy = std::log(err) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::Domain, "order fit needs distinct dt");
  OrderFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::vector<ConvergenceReport> strong_error_ladders(
    const ModelParams& params, const JumpCoefficient& h,
    const std::vector<Scheme>& schemes, const LadderSpec& ladder,
    const RunConfig& run, const SolverConfig& solver) {
  require_paths(run);
  solver.validate();
  if (ladder.M_list.empty() || schemes.empty()) {
    throw Error(ErrorKind::Config, "ladder needs at least one step size and scheme");
  }
  for (int M : ladder.M_list) {
    if (M < 1 || ladder.M_ref % M != 0) {
      throw Error(ErrorKind::Mesh,
                  fmt::format("ladder M = {} does not divide M_ref = {}", M,
                              ladder.M_ref));
    }
  }
  const double Q = compute_q(params);
  const double Q_f = compute_drift_q(params);
  const std::size_t n_levels = ladder.M_list.size();
  const std::size_t n_schemes = schemes.size();

  // [path][scheme * n_levels + level]
  std::vector<std::vector<double>> diffs(run.n_paths);
  run_paths(run.n_paths, run, [&](std::size_t i) {
    const PathBundle bundle = generate_bundle(params, ladder.M_ref, run.seed, i);
    const double x_ref =
        tjabem_path(params, h, bundle.fine_mesh, bundle.dW_fine, Q, solver).x_T;
    std::vector<double>& row = diffs[i];
    row.resize(n_schemes * n_levels);
    for (std::size_t s = 0; s < n_schemes; ++s) {
      for (std::size_t l = 0; l < n_levels; ++l) {
        const int M = ladder.M_list[l];
        double x = 0.0;
        if (schemes[s] == Scheme::Tjabem) {
          const CoarsePath coarse = coarsen_increments(bundle, M);
          x = tjabem_path(params, h, coarse.mesh, coarse.dW, Q, solver).x_T;
        } else {
          const RegularPath regular = regular_increments(bundle, M);
          x = bem_path(params, h, M, regular.dW, regular.dN, Q_f, solver);
        }
        row[s * n_levels + l] = std::abs(x_ref - x);
      }
    }
  });

  std::vector<ConvergenceReport> reports;
  std::vector<double> column(run.n_paths);
  for (std::size_t s = 0; s < n_schemes; ++s) {
    ConvergenceReport report;
    report.scheme = schemes[s];
    report.n_paths = run.n_paths;
    report.M_ref = ladder.M_ref;
    report.seed = run.seed;
    std::vector<std::pair<double, double>> fit_points;
    for (std::size_t l = 0; l < n_levels; ++l) {
      double sq = 0.0;
      for (std::size_t i = 0; i < run.n_paths; ++i) {
        column[i] = diffs[i][s * n_levels + l];
        sq += column[i] * column[i];
      }
      const MeanAndError stats = mean_and_stderr(column);
      LadderPoint point;
      point.M = ladder.M_list[l];
      point.dt = params.T / point.M;
      point.error_l1 = stats.mean;
      point.stderr_l1 = stats.stderr_;
      point.error_l2 = std::sqrt(sq / static_cast<double>(run.n_paths));
      report.points.push_back(point);
    }
    std::sort(report.points.begin(), report.points.end(),
              [](const LadderPoint& a, const LadderPoint& b) { return a.dt > b.dt; });
    for (const auto& point : report.points) {
      fit_points.emplace_back(point.dt, point.error_l1);
    }
    if (fit_points.size() >= 2) report.fit = fit_order(fit_points);
    reports.push_back(std::move(report));
  }
  return reports;
}

ConvergenceReport strong_error_ladder(const ModelParams& params,
                                      const JumpCoefficient& h, Scheme scheme,
                                      const LadderSpec& ladder,
                                      const RunConfig& run,
                                      const SolverConfig& solver) {
  return strong_error_ladders(params, h, {scheme}, ladder, run, solver).front();
}

int monotone_pairs(const ConvergenceReport& report) {
  int count = 0;
  for (std::size_t l = 0; l + 1 < report.points.size(); ++l) {
    if (report.points[l + 1].error_l1 < report.points[l].error_l1) ++count;
  }
  return count;
}

PositivityReport positivity_table(const std::vector<NamedParams>& sets,
                                  const std::vector<JumpCoefficient>& jumps,
                                  const std::vector<int>& M_list, double lambda,
                                  const RunConfig& run,
                                  const SolverConfig& solver) {
  require_paths(run);
  solver.validate();
  PositivityReport report;
  report.n_paths = run.n_paths;
  report.seed = run.seed;
  for (int M : M_list) {
    for (const JumpCoefficient& h : jumps) {
      for (const NamedParams& set : sets) {
        ModelParams params = set.params;
        params.lambda = lambda;
        const double Q = compute_q(params);

        std::vector<std::uint64_t> values(run.n_paths), bad(run.n_paths);
        run_paths(run.n_paths, run, [&](std::size_t i) {
          const PathBundle bundle = generate_bundle(params, M, run.seed, i);
          const auto result =
              tjabem_path(params, h, bundle.fine_mesh, bundle.dW_fine, Q, solver);
          const double exponent = 1.0 / (1.0 - params.rho);
          for (double z : result.trajectory.z_post) {
            const double x = std::pow(z, exponent);
            ++values[i];
            if (!(x > 0.0) || !std::isfinite(x)) ++bad[i];
          }
        });

        PositivityCell cell;
        cell.param_set = set.name;
        cell.h_family = h.describe();
        cell.dt = params.T / M;
        for (std::size_t i = 0; i < run.n_paths; ++i) {
          cell.n_values += values[i];
          cell.n_nonpositive += bad[i];
        }
        cell.percent = cell.n_values == 0
                           ? 0.0
                           : 100.0 * static_cast<double>(cell.n_nonpositive) /
                                 static_cast<double>(cell.n_values);
        report.cells.push_back(cell);
      }
    }
  }
  return report;
}

MomentTable moment_probe(const ModelParams& params, const JumpCoefficient& h,
                         int M, const std::vector<double>& p_list,
                         const RunConfig& run, const SolverConfig& solver) {
  require_paths(run);
  solver.validate();
  const RegimeCheck regime = validate_params(params);
  for (double p : p_list) {
    if (!regime.admits_moment(p)) {
      throw Error(ErrorKind::Validation,
                  fmt::format("moment p = {} is not covered by the {} regime "
                              "(cap {})",
                              p, to_string(regime.regime),
                              regime.critical_moment_cap.value_or(0.0)));
    }
  }
  const double Q = compute_q(params);
  const std::size_t n_p = p_list.size();

  // [path][2 * p_index] = sup moment, [2 * p_index + 1] = terminal moment
  std::vector<std::vector<double>> samples(run.n_paths);
  run_paths(run.n_paths, run, [&](std::size_t i) {
    const PathBundle bundle = generate_bundle(params, M, run.seed, i);
    const auto result =
        tjabem_path(params, h, bundle.fine_mesh, bundle.dW_fine, Q, solver);
    const auto& z = result.trajectory.z_post;
    auto& row = samples[i];
    row.resize(2 * n_p);
    for (std::size_t j = 0; j < n_p; ++j) {
      double sup = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < z.size(); ++k) {
        sup = std::max(sup, std::pow(lamperti_inverse(params.rho, z[k]), p_list[j]));
      }
      row[2 * j] = sup;
      row[2 * j + 1] = std::pow(result.x_T, p_list[j]);
    }
  });

  MomentTable table;
  table.M = M;
  table.n_paths = run.n_paths;
  table.seed = run.seed;
  std::vector<double> column(run.n_paths);
  for (std::size_t j = 0; j < n_p; ++j) {
    MomentRow row;
    row.p = p_list[j];
    for (std::size_t i = 0; i < run.n_paths; ++i) column[i] = samples[i][2 * j];
    const MeanAndError sup = mean_and_stderr(column);
    for (std::size_t i = 0; i < run.n_paths; ++i) column[i] = samples[i][2 * j + 1];
    const MeanAndError terminal = mean_and_stderr(column);
    row.sup_mean = sup.mean;
    row.sup_stderr = sup.stderr_;
    row.terminal_mean = terminal.mean;
    row.terminal_stderr = terminal.stderr_;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace jumpsde
