#pragma once

// Experiment configuration: INI-style text with named blocks
//
//   [model]  alpha_m1 alpha0 alpha1 alpha2 alpha3 gamma rho lambda x0 T
//   [jump]   h = linear:-0.5 | sine:1 | rational:0.3 | zero
//   [experiment] scheme = tjabem | bem | both
//   [ladder] M_list, M_ref
//   [simulate] M, path_index
//   [positivity] presets, h_list, M_list
//   [moments] M, p_list
//   [run]    n_paths, seed, parallelism, fast_mode
//   [solver] residual_tol, max_iter, step_safety, bracket_lo_floor
//   [output] directory, formats
//
// Keys missing from a file keep the defaults below; unknown keys are errors.

#include <cstdint>
#include <string>
#include <vector>

#include "jumpsde/harness.hpp"
#include "jumpsde/model.hpp"
#include "jumpsde/solver.hpp"

namespace jumpsde {

enum class SchemeChoice { Tjabem, Bem, Both };

struct ExperimentConfig {
  std::string origin = "default";  // preset name or file path
  ModelParams model = parameter_set_one();
  std::string jump = "linear:-0.5";
  SchemeChoice scheme = SchemeChoice::Tjabem;
  LadderSpec ladder{{32, 64, 128, 256, 512}, 4096};
  int simulate_M = 32;
  std::uint64_t simulate_path_index = 0;
  std::vector<std::string> positivity_presets{"set1", "set2"};
  std::vector<std::string> positivity_jumps{"linear:-0.5", "linear:0.5", "sine:1"};
  std::vector<int> positivity_M_list{32, 64, 128};
  int moments_M = 128;
  std::vector<double> moments_p{-2.0, 0.0, 2.0};
  RunConfig run;
  bool fast_mode = false;
  SolverConfig solver;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};

  std::vector<Scheme> schemes() const;
  JumpCoefficient jump_coefficient() const { return JumpCoefficient::parse(jump); }
};

// Throws Error(Config) on syntax errors, unknown keys, or bad values.
ExperimentConfig parse_config(const std::string& text,
                              const std::string& origin = "inline");
ExperimentConfig load_config_file(const std::string& path);

// "set1" / "set2"; throws Error(Config) for other names.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Sets one "block.key" entry from its text form, e.g. ("model.lambda", "5").
void set_config_value(ExperimentConfig& cfg, const std::string& dotted_key,
                      const std::string& value);

// Canonical text form; parse_config(render_config(c)) reproduces c. The
// parallelism setting is left out unless requested since it never changes
// results.
std::string render_config(const ExperimentConfig& cfg,
                          bool include_parallelism = false);

// Fast mode: at most 1000 paths and a reference grid halved while staying at
// least four times finer than the finest ladder step. Identity otherwise.
ExperimentConfig resolve_fast_mode(const ExperimentConfig& cfg);

}  // namespace jumpsde
