// jumpsde command-line driver. Talks to the library only through the C API.
//
//   jumpsde validate    --preset set1 --h linear:-1.5
//   jumpsde simulate    --preset set1 --seed 42 --out traj.csv
//   jumpsde convergence --preset set1 --h linear:1 --lambda 5 --scheme both
//   jumpsde positivity  --presets set1,set2 --fast
//   jumpsde moments     --config my.ini
//
// Exit codes: 0 success, 1 validation/config failure, 2 runtime failure.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "jumpsde/jumpsde.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct ExperimentDeleter {
  void operator()(jsde_experiment* e) const { jsde_experiment_destroy(e); }
};
struct TextDeleter {
  void operator()(jsde_text* t) const { jsde_text_destroy(t); }
};
using ExperimentPtr = std::unique_ptr<jsde_experiment, ExperimentDeleter>;
using TextPtr = std::unique_ptr<jsde_text, TextDeleter>;

struct Options {
  std::string config_file;
  std::string preset = "set1";
  std::optional<std::string> h;
  std::optional<std::string> lambda;
  std::optional<std::string> scheme;
  std::optional<std::string> seed;
  std::optional<std::string> presets;
  std::optional<std::string> M;
  std::optional<std::string> path_index;
  std::optional<std::string> n_paths;
  std::optional<std::string> parallelism;
  std::vector<std::string> overrides;  // block.key=value
  bool fast = false;
  std::string out;
};

class Failure {
 public:
  Failure(int code, std::string message) : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

int exit_code_for(jsde_status status) {
  switch (status) {
    case JSDE_OK: return kExitOk;
    case JSDE_ERR_VALIDATION:
    case JSDE_ERR_CONFIG:
    case JSDE_ERR_INVALID_ARGUMENT:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

void check(jsde_status status) {
  if (status != JSDE_OK) {
    throw Failure(exit_code_for(status),
                  std::string(jsde_status_name(status)) + ": " + jsde_last_error());
  }
}

void set(jsde_experiment* exp, const std::string& key, const std::string& value) {
  check(jsde_experiment_set(exp, key.c_str(), value.c_str()));
}

ExperimentPtr build_experiment(const Options& opt, const std::string& command) {
  jsde_experiment* raw = nullptr;
  if (!opt.config_file.empty()) {
    check(jsde_experiment_from_file(opt.config_file.c_str(), &raw));
  } else {
    check(jsde_experiment_from_preset(opt.preset.c_str(), &raw));
  }
  ExperimentPtr exp(raw);

  if (opt.h) set(exp.get(), "jump.h", *opt.h);
  if (opt.lambda) set(exp.get(), "model.lambda", *opt.lambda);
  if (opt.scheme) set(exp.get(), "experiment.scheme", *opt.scheme);
  if (opt.presets) set(exp.get(), "positivity.presets", *opt.presets);
  if (opt.M) set(exp.get(), command == "moments" ? "moments.M" : "simulate.M", *opt.M);
  if (opt.path_index) set(exp.get(), "simulate.path_index", *opt.path_index);
  if (opt.n_paths) set(exp.get(), "run.n_paths", *opt.n_paths);
  if (opt.parallelism) set(exp.get(), "run.parallelism", *opt.parallelism);
  if (opt.fast) set(exp.get(), "run.fast_mode", "true");
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Failure(kExitValidation, "--set expects block.key=value, got '" + kv + "'");
    }
    set(exp.get(), kv.substr(0, eq), kv.substr(eq + 1));
  }
  // Seed precedence: --seed, then JUMPSDE_SEED, then the config file.
  if (opt.seed) {
    set(exp.get(), "run.seed", *opt.seed);
  } else if (const char* env = std::getenv("JUMPSDE_SEED"); env && *env) {
    set(exp.get(), "run.seed", env);
  }
  return exp;
}

int run_command(const std::string& command, const Options& opt) {
  ExperimentPtr exp = build_experiment(opt, command);
  jsde_text* raw = nullptr;
  const char* out = opt.out.empty() ? nullptr : opt.out.c_str();
  jsde_status status = JSDE_OK;
  if (command == "validate") {
    status = jsde_run_validate(exp.get(), &raw);
  } else if (command == "simulate") {
    status = jsde_run_simulate(exp.get(), out, &raw);
  } else if (command == "convergence") {
    status = jsde_run_convergence(exp.get(), out, &raw);
  } else if (command == "positivity") {
    status = jsde_run_positivity(exp.get(), out, &raw);
  } else if (command == "moments") {
    status = jsde_run_moments(exp.get(), out, &raw);
  }
  TextPtr report(raw);
  if (report) std::fputs(jsde_text_data(report.get()), stdout);
  if (command == "validate" && status == JSDE_ERR_VALIDATION) {
    std::fprintf(stderr, "validation failed: %s\n", jsde_last_error());
    return kExitValidation;
  }
  check(status);
  return kExitOk;
}

void add_common_options(CLI::App* cmd, Options& opt) {
  auto* config = cmd->add_option("--config", opt.config_file, "Experiment config file");
  cmd->add_option("--preset", opt.preset, "Bundled preset (set1, set2)")
      ->excludes(config);
  cmd->add_option("--h", opt.h, "Jump coefficient, e.g. linear:-0.5, sine:1, zero");
  cmd->add_option("--lambda", opt.lambda, "Poisson intensity");
  cmd->add_option("--scheme", opt.scheme, "tjabem, bem or both");
  cmd->add_option("--seed", opt.seed, "Global seed (overrides JUMPSDE_SEED)");
  cmd->add_flag("--fast", opt.fast, "At most 1000 paths and a coarser reference grid");
  cmd->add_option("--n-paths", opt.n_paths, "Number of Monte Carlo paths");
  cmd->add_option("--parallelism", opt.parallelism, "Worker threads (0 = all cores)");
  cmd->add_option("--set", opt.overrides, "Override any config entry: block.key=value");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity-preserving simulation of a jump-extended Ait-Sahalia model"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(jsde_version()));

  Options opt;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"validate", "Check regime, step sizes and jump assumptions"},
      {"simulate", "Write one trajectory of the transformed scheme"},
      {"convergence", "Strong-error ladder and fitted order"},
      {"positivity", "Count non-positive values across presets and jumps"},
      {"moments", "Monte Carlo moment probe"},
  };
  for (const auto& c : commands) {
    CLI::App* cmd = app.add_subcommand(c.name, c.help);
    cmd->set_help_flag("--help", "Print this help message and exit");
    add_common_options(cmd, opt);
    const std::string name = c.name;
    if (name == "simulate") {
      cmd->add_option("--out", opt.out, "Trajectory CSV path");
      cmd->add_option("--M", opt.M, "Number of base grid steps");
      cmd->add_option("--path-index", opt.path_index, "Path to replay");
    } else {
      cmd->add_option("--out", opt.out, "Output directory");
    }
    if (name == "positivity") {
      cmd->add_option("--presets", opt.presets, "Comma-separated presets");
    }
    if (name == "moments") cmd->add_option("--M", opt.M, "Number of base grid steps");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();
  try {
    return run_command(command, opt);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message().c_str());
    return f.code();
  }
}
