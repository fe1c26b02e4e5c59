#include "jumpsde/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "jumpsde/error.hpp"
#include "presets.hpp"

namespace jumpsde {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorKind::Config, fmt::format("bad value '{}' for {}", value, key));
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

long long to_integer(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  if (value.empty() || value.front() == '-') bad_value(key, value);
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

int to_positive_int(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < 1 || v > (1LL << 30)) bad_value(key, value);
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& item : split_list(value)) out.push_back(to_positive_int(key, item));
  if (out.empty()) bad_value(key, value);
  return out;
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

const char* scheme_name(SchemeChoice s) {
  switch (s) {
    case SchemeChoice::Tjabem: return "tjabem";
    case SchemeChoice::Bem: return "bem";
    case SchemeChoice::Both: return "both";
  }
  return "?";
}

}  // namespace

std::vector<Scheme> ExperimentConfig::schemes() const {
  switch (scheme) {
    case SchemeChoice::Tjabem: return {Scheme::Tjabem};
    case SchemeChoice::Bem: return {Scheme::Bem};
    case SchemeChoice::Both: return {Scheme::Tjabem, Scheme::Bem};
  }
  return {};
}

void set_config_value(ExperimentConfig& cfg, const std::string& dotted_key,
                      const std::string& raw) {
  const std::string& k = dotted_key;
  const std::string v = trim(raw);
  ModelParams& m = cfg.model;
  if (k == "model.alpha_m1") m.alpha_m1 = to_double(k, v);
  else if (k == "model.alpha0") m.alpha0 = to_double(k, v);
  else if (k == "model.alpha1") m.alpha1 = to_double(k, v);
  else if (k == "model.alpha2") m.alpha2 = to_double(k, v);
  else if (k == "model.alpha3") m.alpha3 = to_double(k, v);
  else if (k == "model.gamma") m.gamma = to_double(k, v);
  else if (k == "model.rho") m.rho = to_double(k, v);
  else if (k == "model.lambda") m.lambda = to_double(k, v);
  else if (k == "model.x0") m.x0 = to_double(k, v);
  else if (k == "model.T") m.T = to_double(k, v);
  else if (k == "jump.h") {
    JumpCoefficient::parse(v);
    cfg.jump = v;
  } else if (k == "experiment.scheme") {
    if (v == "tjabem") cfg.scheme = SchemeChoice::Tjabem;
    else if (v == "bem") cfg.scheme = SchemeChoice::Bem;
    else if (v == "both") cfg.scheme = SchemeChoice::Both;
    else bad_value(k, v);
  } else if (k == "ladder.M_list") cfg.ladder.M_list = to_int_list(k, v);
  else if (k == "ladder.M_ref") cfg.ladder.M_ref = to_positive_int(k, v);
  else if (k == "simulate.M") cfg.simulate_M = to_positive_int(k, v);
  else if (k == "simulate.path_index") cfg.simulate_path_index = to_unsigned(k, v);
  else if (k == "positivity.presets") {
    cfg.positivity_presets = split_list(v);
    const auto known = preset_names();
    for (const auto& name : cfg.positivity_presets) {
      if (std::find(known.begin(), known.end(), name) == known.end()) bad_value(k, v);
    }
  } else if (k == "positivity.h_list") {
    cfg.positivity_jumps = split_list(v);
    for (const auto& spec : cfg.positivity_jumps) JumpCoefficient::parse(spec);
  } else if (k == "positivity.M_list") cfg.positivity_M_list = to_int_list(k, v);
  else if (k == "moments.M") cfg.moments_M = to_positive_int(k, v);
  else if (k == "moments.p_list") {
    cfg.moments_p.clear();
    for (const auto& item : split_list(v)) cfg.moments_p.push_back(to_double(k, item));
    if (cfg.moments_p.empty()) bad_value(k, v);
  } else if (k == "run.n_paths") cfg.run.n_paths = to_unsigned(k, v);
  else if (k == "run.seed") cfg.run.seed = to_unsigned(k, v);
  else if (k == "run.parallelism") cfg.run.parallelism = static_cast<unsigned>(to_unsigned(k, v));
  else if (k == "run.fast_mode") cfg.fast_mode = to_bool(k, v);
  else if (k == "solver.residual_tol") cfg.solver.residual_tol = to_double(k, v);
  else if (k == "solver.max_iter") cfg.solver.max_iter = to_positive_int(k, v);
  else if (k == "solver.step_safety") cfg.solver.step_safety = to_double(k, v);
  else if (k == "solver.bracket_lo_floor") cfg.solver.bracket_lo_floor = to_double(k, v);
  else if (k == "output.directory") cfg.out_dir = v;
  else if (k == "output.formats") cfg.formats = split_list(v);
  else throw Error(ErrorKind::Config, fmt::format("unknown config key '{}'", k));
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Config,
                fmt::format("{}: line {}: {}", origin, e.line(), e.message()));
  }
  ExperimentConfig cfg;
  cfg.origin = origin;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw Error(ErrorKind::Config,
                  fmt::format("{}: key '{}' outside a [block]", origin, section));
    }
    for (const auto& [key, value] : body) {
      set_config_value(cfg, section + "." + key, value.data());
    }
  }
  cfg.solver.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open config '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::vector<std::string> preset_names() { return {"set1", "set2"}; }

ExperimentConfig preset_config(const std::string& name) {
  if (name == "set1") return parse_config(presets::kSet1, "set1");
  if (name == "set2") return parse_config(presets::kSet2, "set2");
  throw Error(ErrorKind::Config,
              fmt::format("unknown preset '{}' (available: {})", name,
                          fmt::join(preset_names(), ", ")));
}

std::string render_config(const ExperimentConfig& cfg, bool include_parallelism) {
  const ModelParams& m = cfg.model;
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  out += "[model]\n";
  line("alpha_m1", fmt_double(m.alpha_m1));
  line("alpha0", fmt_double(m.alpha0));
  line("alpha1", fmt_double(m.alpha1));
  line("alpha2", fmt_double(m.alpha2));
  line("alpha3", fmt_double(m.alpha3));
  line("gamma", fmt_double(m.gamma));
  line("rho", fmt_double(m.rho));
  line("lambda", fmt_double(m.lambda));
  line("x0", fmt_double(m.x0));
  line("T", fmt_double(m.T));
  out += "\n[jump]\n";
  line("h", cfg.jump);
  out += "\n[experiment]\n";
  line("scheme", scheme_name(cfg.scheme));
  out += "\n[ladder]\n";
  line("M_list", fmt::format("{}", fmt::join(cfg.ladder.M_list, ",")));
  line("M_ref", std::to_string(cfg.ladder.M_ref));
  out += "\n[simulate]\n";
  line("M", std::to_string(cfg.simulate_M));
  line("path_index", std::to_string(cfg.simulate_path_index));
  out += "\n[positivity]\n";
  line("presets", fmt::format("{}", fmt::join(cfg.positivity_presets, ",")));
  line("h_list", fmt::format("{}", fmt::join(cfg.positivity_jumps, ",")));
  line("M_list", fmt::format("{}", fmt::join(cfg.positivity_M_list, ",")));
  out += "\n[moments]\n";
  line("M", std::to_string(cfg.moments_M));
  std::vector<std::string> ps;
  for (double p : cfg.moments_p) ps.push_back(fmt_double(p));
  line("p_list", fmt::format("{}", fmt::join(ps, ",")));
  out += "\n[run]\n";
  line("n_paths", std::to_string(cfg.run.n_paths));
  line("seed", std::to_string(cfg.run.seed));
  if (include_parallelism) line("parallelism", std::to_string(cfg.run.parallelism));
  line("fast_mode", cfg.fast_mode ? "true" : "false");
  out += "\n[solver]\n";
  line("residual_tol", fmt_double(cfg.solver.residual_tol));
  line("max_iter", std::to_string(cfg.solver.max_iter));
  line("step_safety", fmt_double(cfg.solver.step_safety));
  line("bracket_lo_floor", fmt_double(cfg.solver.bracket_lo_floor));
  out += "\n[output]\n";
  line("directory", cfg.out_dir);
  line("formats", fmt::format("{}", fmt::join(cfg.formats, ",")));
  return out;
}

ExperimentConfig resolve_fast_mode(const ExperimentConfig& cfg) {
  if (!cfg.fast_mode) return cfg;
  ExperimentConfig out = cfg;
  out.run.n_paths = std::min<std::size_t>(out.run.n_paths, 1000);
  const int finest = *std::max_element(out.ladder.M_list.begin(), out.ladder.M_list.end());
  if (out.ladder.M_ref % 2 == 0 && out.ladder.M_ref / 2 >= 4 * finest) {
    out.ladder.M_ref /= 2;
  }
  return out;
}

}  // namespace jumpsde
