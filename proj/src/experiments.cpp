#include "jumpsde/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include <fmt/format.h>
#include <json.hpp>

#include "jumpsde/error.hpp"
#include "jumpsde/paths.hpp"
#include "jumpsde/report_io.hpp"

namespace jumpsde {

namespace {

bool wants(const ExperimentConfig& cfg, const std::string& format) {
  return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

std::ofstream open_output(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write '{}'", file.string()));
  return out;
}

void write_text(const std::filesystem::path& file, const std::string& text,
                CommandOutcome& outcome) {
  auto out = open_output(file);
  out << text;
  outcome.files.push_back(file);
}

template <typename Writer>
void write_with(const std::filesystem::path& file, Writer&& writer,
                CommandOutcome& outcome) {
  auto out = open_output(file);
  writer(out);
  outcome.files.push_back(file);
}

// Parameter and jump gates shared by every simulating command.
JumpCoefficient checked_jump(const ExperimentConfig& cfg, JumpRequirement requirement) {
  validate_params(cfg.model);
  JumpCoefficient h = cfg.jump_coefficient();
  validate_jump(h, cfg.model, requirement);
  return h;
}

}  // namespace

ValidationOutcome run_validate(const ExperimentConfig& cfg) {
  ValidationOutcome outcome;
  std::string& text = outcome.text;
  auto fail = [&](const std::string& gate) {
    if (outcome.failed_gate.empty()) outcome.failed_gate = gate;
    text += fmt::format("FAIL  {}\n", gate);
  };

  text += fmt::format("config: {}\n", cfg.origin);
  std::optional<RegimeCheck> regime;
  try {
    regime = validate_params(cfg.model);
    text += fmt::format("regime: {}\n", to_string(regime->regime));
    if (regime->critical_moment_cap) {
      text += fmt::format("critical moment cap: {:.6g}\n", *regime->critical_moment_cap);
    }
  } catch (const Error& e) {
    text += fmt::format("regime: {}\n", to_string(classify_regime(cfg.model)));
    fail(e.what());
  }

  std::optional<double> Q;
  if (regime) {
    Q = compute_q(cfg.model);
    text += fmt::format("Q: {:.17g}\n", *Q);
  }

  std::vector<int> steps = cfg.ladder.M_list;
  steps.push_back(cfg.ladder.M_ref);
  steps.push_back(cfg.simulate_M);
  steps.push_back(cfg.moments_M);
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  if (Q) {
    for (int M : steps) {
      const double q_dt = *Q * cfg.model.T / M;
      text += fmt::format("M = {:>6}  dt = {:.6g}  Q*dt = {:.6g}\n", M,
                          cfg.model.T / M, q_dt);
      if (q_dt > cfg.solver.step_safety) {
        fail(fmt::format("step size: Q*dt = {} exceeds step_safety = {} at M = {}",
                         q_dt, cfg.solver.step_safety, M));
      }
    }
  }
  for (int M : cfg.ladder.M_list) {
    if (cfg.ladder.M_ref % M != 0) {
      fail(fmt::format("ladder: M = {} does not divide M_ref = {}", M, cfg.ladder.M_ref));
    }
  }

  try {
    const JumpCoefficient h = cfg.jump_coefficient();
    const JumpBounds b = validate_jump(h, cfg.model, JumpRequirement::GrowthOnly);
    text += fmt::format("jump {}: mu = {:.6g}, r = {:.6g}, band = [{:.6g}, {:.6g}]{}\n",
                        h.describe(), b.mu, b.r, b.mu1, b.mu2,
                        b.sampled_only ? " (sampled only)" : "");
    if (!b.band_ok()) {
      fail(fmt::format("band assumption violated for {}: lower end {} is not positive",
                       h.describe(), b.mu1));
    }
  } catch (const Error& e) {
    fail(e.what());
  }

  if (regime && Q && regime->regime == Regime::Supercritical) {
    const double eps = 0.5 * max_diagnostic_epsilon(cfg.model);
    for (int M : cfg.ladder.M_list) {
      const auto d = step_size_diagnostics(cfg.model, *Q, cfg.model.T / M, eps);
      text += fmt::format("diagnostics M = {:>6} (m = {:.6g}, eps = {:.4g}): "
                          "tail condition {}, moment condition {} (advisory)\n",
                          M, d.m, eps, d.tail_condition_ok ? "holds" : "fails",
                          d.moment_condition_ok ? "holds" : "fails");
    }
  }

  outcome.ok = outcome.failed_gate.empty();
  text += outcome.ok ? "all gates pass\n" : "validation failed\n";
  return outcome;
}

CommandOutcome run_simulate(const ExperimentConfig& cfg,
                            const std::filesystem::path& out_file) {
  const JumpCoefficient h = checked_jump(cfg, JumpRequirement::GrowthOnly);
  cfg.solver.validate();
  const double Q = compute_q(cfg.model);
  const std::uint64_t index = cfg.simulate_path_index;
  TjabemResult result;
  PathBundle bundle;
  try {
    bundle = generate_bundle(cfg.model, cfg.simulate_M, cfg.run.seed, index);
    result = tjabem_path(cfg.model, h, bundle.fine_mesh, bundle.dW_fine, Q, cfg.solver);
  } catch (const Error& e) {
    throw PathFailure(e.kind(), cfg.run.seed, index, e.what());
  }

  CommandOutcome outcome;
  write_with(out_file, [&](std::ostream& os) {
    write_trajectory_csv(os, result.trajectory, cfg.model.rho);
  }, outcome);
  if (wants(cfg, "json")) {
    nlohmann::ordered_json summary;
    summary["path_index"] = index;
    summary["seed"] = cfg.run.seed;
    summary["M"] = cfg.simulate_M;
    summary["jumps"] = bundle.fine_mesh.jump_count();
    summary["nodes"] = bundle.fine_mesh.nodes.size();
    summary["x_T"] = result.x_T;
    auto json_file = out_file;
    json_file.replace_extension(".json");
    write_text(json_file, report_json("trajectory", summary.dump(), render_config(cfg)),
               outcome);
  }
  outcome.text = fmt::format("path {} (seed {}): {} nodes, {} jumps, x_T = {:.17g}\n",
                             index, cfg.run.seed, bundle.fine_mesh.nodes.size(),
                             bundle.fine_mesh.jump_count(), result.x_T);
  return outcome;
}

CommandOutcome run_convergence(const ExperimentConfig& cfg,
                               const std::filesystem::path& out_dir) {
  const JumpCoefficient h = checked_jump(cfg, JumpRequirement::GrowthAndBand);
  const auto reports = strong_error_ladders(cfg.model, h, cfg.schemes(), cfg.ladder,
                                            cfg.run, cfg.solver);
  CommandOutcome outcome;
  if (wants(cfg, "csv")) {
    write_with(out_dir / "convergence.csv",
               [&](std::ostream& os) { write_convergence_csv(os, reports); }, outcome);
    for (const auto& report : reports) {
      write_with(out_dir / fmt::format("plot_{}.csv", to_string(report.scheme)),
                 [&](std::ostream& os) { write_plot_data(os, report); }, outcome);
    }
  }
  if (wants(cfg, "json")) {
    write_text(out_dir / "convergence.json",
               convergence_json(reports, render_config(cfg)), outcome);
  }
  for (const auto& report : reports) {
    outcome.text += fmt::format("{}: slope = {:.4f}, r2 = {:.4f} ({} paths, M_ref = {})\n",
                                to_string(report.scheme), report.fit.slope,
                                report.fit.r2, report.n_paths, report.M_ref);
    for (const auto& p : report.points) {
      outcome.text += fmt::format("  dt = 2^{:<4g} error = {:.6e} +- {:.2e}\n",
                                  std::log2(p.dt), p.error_l1, p.stderr_l1);
    }
    if (report.scheme == Scheme::Tjabem && report.points.size() >= 5 &&
        monotone_pairs(report) < static_cast<int>(report.points.size()) - 2) {
      outcome.text += "  note: errors are not monotone in dt on this ladder\n";
    }
  }
  return outcome;
}

CommandOutcome run_positivity(const ExperimentConfig& cfg,
                              const std::filesystem::path& out_dir) {
  std::vector<NamedParams> sets;
  for (const auto& name : cfg.positivity_presets) {
    NamedParams set{name, preset_config(name).model};
    set.params.lambda = cfg.model.lambda;
    validate_params(set.params);
    sets.push_back(set);
  }
  std::vector<JumpCoefficient> jumps;
  for (const auto& spec : cfg.positivity_jumps) {
    jumps.push_back(JumpCoefficient::parse(spec));
    for (const auto& set : sets) {
      validate_jump(jumps.back(), set.params, JumpRequirement::GrowthOnly);
    }
  }
  const PositivityReport report = positivity_table(
      sets, jumps, cfg.positivity_M_list, cfg.model.lambda, cfg.run, cfg.solver);

  CommandOutcome outcome;
  if (wants(cfg, "csv")) {
    write_with(out_dir / "positivity.csv",
               [&](std::ostream& os) { write_positivity_csv(os, report); }, outcome);
  }
  std::uint64_t total = 0, bad = 0;
  for (const auto& c : report.cells) {
    total += c.n_values;
    bad += c.n_nonpositive;
    outcome.text += fmt::format("{:<6} {:<14} dt = {:<10.6g} {:>10} values  {:.4f}% non-positive\n",
                                c.param_set, c.h_family, c.dt, c.n_values, c.percent);
  }
  if (wants(cfg, "json")) {
    nlohmann::ordered_json summary;
    summary["n_paths"] = report.n_paths;
    summary["seed"] = report.seed;
    summary["lambda"] = cfg.model.lambda;
    summary["n_values"] = total;
    summary["n_nonpositive"] = bad;
    write_text(out_dir / "positivity.json",
               report_json("positivity", summary.dump(), render_config(cfg)), outcome);
  }
  return outcome;
}

CommandOutcome run_moments(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir) {
  const JumpCoefficient h = checked_jump(cfg, JumpRequirement::GrowthOnly);
  const MomentTable table =
      moment_probe(cfg.model, h, cfg.moments_M, cfg.moments_p, cfg.run, cfg.solver);
  CommandOutcome outcome;
  if (wants(cfg, "csv")) {
    write_with(out_dir / "moments.csv",
               [&](std::ostream& os) { write_moments_csv(os, table); }, outcome);
  }
  if (wants(cfg, "json")) {
    nlohmann::ordered_json summary;
    summary["M"] = table.M;
    summary["n_paths"] = table.n_paths;
    summary["seed"] = table.seed;
    write_text(out_dir / "moments.json",
               report_json("moments", summary.dump(), render_config(cfg)), outcome);
  }
  for (const auto& r : table.rows) {
    outcome.text += fmt::format("p = {:<6g} E[sup X^p] = {:.6e} +- {:.2e}   E[X_T^p] = {:.6e} +- {:.2e}\n",
                                r.p, r.sup_mean, r.sup_stderr, r.terminal_mean,
                                r.terminal_stderr);
  }
  return outcome;
}

}  // namespace jumpsde
