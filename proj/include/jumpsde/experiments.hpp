#pragma once

// Command-level operations behind the CLI: each takes a resolved
// ExperimentConfig, writes its report files and returns a human-readable
// summary. Validation failures throw Error(Validation); anything raised
// while simulating surfaces as Error/PathFailure.

#include <filesystem>
#include <string>
#include <vector>

#include "jumpsde/config.hpp"

namespace jumpsde {

struct ValidationOutcome {
  bool ok = false;
  std::string failed_gate;  // first failing gate, empty when ok
  std::string text;         // full report
};

ValidationOutcome run_validate(const ExperimentConfig& cfg);

struct CommandOutcome {
  std::string text;
  std::vector<std::filesystem::path> files;
};

// Writes one trajectory (t,is_jump,z_pre,z_post,x) of the transformed scheme
// on the jump-adapted simulate.M mesh to `out_file`.
CommandOutcome run_simulate(const ExperimentConfig& cfg,
                            const std::filesystem::path& out_file);

// convergence.csv, convergence.json and plot_<scheme>.csv in `out_dir`.
CommandOutcome run_convergence(const ExperimentConfig& cfg,
                               const std::filesystem::path& out_dir);

// positivity.csv (+ positivity.json) in `out_dir`.
CommandOutcome run_positivity(const ExperimentConfig& cfg,
                              const std::filesystem::path& out_dir);

// moments.csv (+ moments.json) in `out_dir`.
CommandOutcome run_moments(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir);

}  // namespace jumpsde
