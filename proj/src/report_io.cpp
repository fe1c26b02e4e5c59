#include "jumpsde/report_io.hpp"

#include <cmath>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

namespace jumpsde {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_convergence_csv(std::ostream& os,
                           const std::vector<ConvergenceReport>& reports) {
  os << "scheme,dt,error_l1,stderr,error_l2,n_paths\n";
  for (const auto& report : reports) {
    for (const auto& p : report.points) {
      fmt::print(os, "{},{},{},{},{},{}\n", to_string(report.scheme), num(p.dt),
                 num(p.error_l1), num(p.stderr_l1), num(p.error_l2),
                 report.n_paths);
    }
  }
}

std::string convergence_json(const std::vector<ConvergenceReport>& reports,
                             const std::string& config_echo) {
  nlohmann::ordered_json doc;
  doc["schemes"] = nlohmann::ordered_json::array();
  for (const auto& report : reports) {
    nlohmann::ordered_json entry;
    entry["scheme"] = to_string(report.scheme);
    entry["slope"] = report.fit.slope;
    entry["intercept"] = report.fit.intercept;
    entry["r2"] = report.fit.r2;
    entry["n_paths"] = report.n_paths;
    entry["M_ref"] = report.M_ref;
    entry["seed"] = report.seed;
    entry["monotone_pairs"] = monotone_pairs(report);
    auto& pts = entry["points"] = nlohmann::ordered_json::array();
    for (const auto& p : report.points) {
      pts.push_back({{"M", p.M},
                     {"dt", p.dt},
                     {"error_l1", p.error_l1},
                     {"stderr", p.stderr_l1},
                     {"error_l2", p.error_l2}});
    }
    doc["schemes"].push_back(std::move(entry));
  }
  doc["config"] = config_echo;
  return doc.dump(2) + "\n";
}

void write_plot_data(std::ostream& os, const ConvergenceReport& report) {
  os << "log2_dt,log2_error,log2_reference\n";
  if (report.points.empty()) return;
  const auto& anchor = report.points.front();
  const double a_dt = std::log2(anchor.dt);
  const double a_err = std::log2(anchor.error_l1);
  for (const auto& p : report.points) {
    const double x = std::log2(p.dt);
    fmt::print(os, "{},{},{}\n", num(x), num(std::log2(p.error_l1)),
               num(a_err + (x - a_dt)));
  }
}

void write_positivity_csv(std::ostream& os, const PositivityReport& report) {
  os << "param_set,h_family,dt,n_values,n_nonpositive,percent\n";
  for (const auto& c : report.cells) {
    fmt::print(os, "{},{},{},{},{},{}\n", c.param_set, c.h_family, num(c.dt),
               c.n_values, c.n_nonpositive, num(c.percent));
  }
}

void write_moments_csv(std::ostream& os, const MomentTable& table) {
  os << "p,sup_mean,sup_stderr,terminal_mean,terminal_stderr,M,n_paths\n";
  for (const auto& r : table.rows) {
    fmt::print(os, "{},{},{},{},{},{},{}\n", num(r.p), num(r.sup_mean),
               num(r.sup_stderr), num(r.terminal_mean), num(r.terminal_stderr),
               table.M, table.n_paths);
  }
}

void write_trajectory_csv(std::ostream& os, const TrajectoryZ& trajectory,
                          double rho) {
  os << "t,is_jump,z_pre,z_post,x\n";
  for (std::size_t k = 0; k < trajectory.mesh.nodes.size(); ++k) {
    fmt::print(os, "{},{},{},{},{}\n", num(trajectory.mesh.nodes[k]),
               trajectory.mesh.is_jump[k] ? 1 : 0, num(trajectory.z_pre[k]),
               num(trajectory.z_post[k]), num(trajectory.x(k, rho)));
  }
}

void write_mesh_csv(std::ostream& os, const JumpAdaptedMesh& mesh) {
  os << "t,is_jump\n";
  for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
    fmt::print(os, "{},{}\n", num(mesh.nodes[k]), mesh.is_jump[k] ? 1 : 0);
  }
}

std::string report_json(const std::string& kind, const std::string& summary_json,
                        const std::string& config_echo) {
  nlohmann::ordered_json doc;
  doc["report"] = kind;
  doc["summary"] = nlohmann::ordered_json::parse(summary_json);
  doc["config"] = config_echo;
  return doc.dump(2) + "\n";
}

}  // namespace jumpsde
