#include "jumpsde/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "jumpsde/error.hpp"

namespace jumpsde {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) {
    throw Error(ErrorKind::Domain,
                fmt::format("{} requires a positive argument, got {}", what, x));
  }
}

// inf of sin(x)/x over x > 0, attained at the first root of tan x = x.
constexpr double kSincMin = -0.21723362821122165741;

// Band bounds from r1 x <= x + h(x) <= r2 x and L1 <= h'(x) <= L2.
JumpBounds bounds_from_envelope(double r1, double r2, double l1, double l2,
                                double rho) {
  JumpBounds b;
  b.mu = std::max(std::abs(l1), std::abs(l2));
  b.r = r1;
  if (r1 > 0.0) {
    b.mu1 = std::pow(r2, -rho) * (1.0 + l1);
    b.mu2 = std::pow(r1, -rho) * (1.0 + l2);
  } else {
    b.mu1 = -std::numeric_limits<double>::infinity();
    b.mu2 = std::numeric_limits<double>::infinity();
  }
  return b;
}

}  // namespace

ModelParams parameter_set_one() {
  ModelParams p;
  p.alpha_m1 = 2.0;
  p.alpha0 = 1.0;
  p.alpha1 = 1.5;
  p.alpha2 = 5.0;
  p.alpha3 = 1.0;
  p.gamma = 3.0;
  p.rho = 1.5;
  p.x0 = 1.0;
  p.T = 1.0;
  return p;
}

ModelParams parameter_set_two() {
  ModelParams p;
  p.alpha_m1 = 1.0;
  p.alpha0 = 2.0;
  p.alpha1 = 1.5;
  p.alpha2 = 3.0;
  p.alpha3 = 1.0;
  p.gamma = 3.5;
  p.rho = 1.5;
  p.x0 = 1.0;
  p.T = 1.0;
  return p;
}

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Supercritical: return "Supercritical";
    case Regime::Critical: return "Critical";
    case Regime::Invalid: return "Invalid";
  }
  return "?";
}

Regime classify_regime(const ModelParams& params) noexcept {
  const double boundary = 2.0 * params.rho - 1.0;
  const double tol = 1e-12 * std::max(1.0, std::abs(boundary));
  if (std::abs(params.gamma - boundary) <= tol) return Regime::Critical;
  return params.gamma > boundary ? Regime::Supercritical : Regime::Invalid;
}

bool RegimeCheck::admits_moment(double p) const noexcept {
  switch (regime) {
    case Regime::Supercritical: return true;
    case Regime::Critical: return critical_moment_cap && p < *critical_moment_cap;
    case Regime::Invalid: return false;
  }
  return false;
}

RegimeCheck validate_params(const ModelParams& params) {
  const std::pair<const char*, double> positives[] = {
      {"alpha_m1", params.alpha_m1}, {"alpha0", params.alpha0},
      {"alpha1", params.alpha1},     {"alpha2", params.alpha2},
      {"alpha3", params.alpha3},     {"x0", params.x0},
      {"T", params.T},
  };
  for (const auto& [name, value] : positives) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw Error(ErrorKind::Validation,
                  fmt::format("{} must be positive, got {}", name, value));
    }
  }
  if (!(params.gamma > 1.0)) {
    throw Error(ErrorKind::Validation,
                fmt::format("gamma must exceed 1, got {}", params.gamma));
  }
  if (!(params.rho > 1.0)) {
    throw Error(ErrorKind::Validation,
                fmt::format("rho must exceed 1, got {}", params.rho));
  }
  if (!(params.lambda >= 0.0) || !std::isfinite(params.lambda)) {
    throw Error(ErrorKind::Validation,
                fmt::format("lambda must be nonnegative, got {}", params.lambda));
  }

  RegimeCheck check;
  check.regime = classify_regime(params);
  if (check.regime == Regime::Invalid) {
    throw Error(ErrorKind::Validation, "Invalid regime: gamma < 2*rho - 1");
  }
  if (check.regime == Regime::Critical) {
    const double cap = params.alpha2 / (params.alpha3 * params.alpha3) -
                       params.rho + 1.5;
    if (!(cap > 1.0)) {
      throw Error(ErrorKind::Validation,
                  fmt::format("Critical regime moment cap alpha2/alpha3^2 - rho "
                              "+ 3/2 = {} leaves no usable p >= 1",
                              cap));
    }
    check.critical_moment_cap = cap;
  }
  return check;
}

double drift_f(const ModelParams& p, double x) {
  require_positive(x, "drift_f");
  return p.alpha_m1 / x - p.alpha0 + p.alpha1 * x - p.alpha2 * std::pow(x, p.gamma);
}

double diffusion_g(const ModelParams& p, double x) {
  require_positive(x, "diffusion_g");
  return p.alpha3 * std::pow(x, p.rho);
}

double drift_f_derivative(const ModelParams& p, double x) {
  require_positive(x, "drift_f_derivative");
  return -p.alpha_m1 / (x * x) + p.alpha1 -
         p.alpha2 * p.gamma * std::pow(x, p.gamma - 1.0);
}

double transformed_drift(const ModelParams& p, double z) {
  require_positive(z, "transformed_drift");
  const double rm1 = p.rho - 1.0;
  return rm1 * (-p.alpha_m1 * std::pow(z, (p.rho + 1.0) / rm1) +
                p.alpha0 * std::pow(z, p.rho / rm1) - p.alpha1 * z +
                p.alpha2 * std::pow(z, -(p.gamma - p.rho) / rm1) +
                0.5 * p.rho * p.alpha3 * p.alpha3 / z);
}

double transformed_drift_derivative(const ModelParams& p, double z) {
  require_positive(z, "transformed_drift_derivative");
  const double rm1 = p.rho - 1.0;
  return -p.alpha_m1 * (p.rho + 1.0) * std::pow(z, 2.0 / rm1) +
         p.alpha0 * p.rho * std::pow(z, 1.0 / rm1) - p.alpha1 * rm1 -
         p.alpha2 * (p.gamma - p.rho) * std::pow(z, -(p.gamma - 1.0) / rm1) -
         0.5 * rm1 * p.rho * p.alpha3 * p.alpha3 / (z * z);
}

double transformed_drift_second_derivative(const ModelParams& p, double z) {
  require_positive(z, "transformed_drift_second_derivative");
  const double rm1 = p.rho - 1.0;
  return -(2.0 * p.alpha_m1 * (p.rho + 1.0) / rm1) *
             std::pow(z, (3.0 - p.rho) / rm1) +
         (p.alpha0 * p.rho / rm1) * std::pow(z, (2.0 - p.rho) / rm1) +
         (p.alpha2 * (p.gamma - p.rho) * (p.gamma - 1.0) / rm1) *
             std::pow(z, -(p.gamma + p.rho - 2.0) / rm1) +
         rm1 * p.rho * p.alpha3 * p.alpha3 / (z * z * z);
}

double clamped_supremum(const std::function<double(double)>& fn,
                        const ProbeGrid& grid) {
  if (!(grid.lo > 0.0) || !(grid.hi > grid.lo) || grid.points < 3) {
    throw Error(ErrorKind::Domain, "probe grid must be 0 < lo < hi with >= 3 points");
  }
  const double log_lo = std::log(grid.lo);
  const double log_step = (std::log(grid.hi) - log_lo) / (grid.points - 1);
  auto node = [&](int i) { return std::exp(log_lo + log_step * i); };

  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.points; ++i) {
    const double v = fn(node(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double a = node(std::max(best - 1, 0));
  double b = node(std::min(best + 1, grid.points - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  while (b - a > 1e-10 * b) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  best_value = std::max({best_value, fc, fd});
  return std::max(0.0, best_value);
}

double compute_q(const ModelParams& params, const ProbeGrid& grid) {
  if (classify_regime(params) == Regime::Invalid) {
    throw Error(ErrorKind::Validation, "Invalid regime: gamma < 2*rho - 1");
  }
  return clamped_supremum(
      [&](double z) { return transformed_drift_derivative(params, z); }, grid);
}

double compute_drift_q(const ModelParams& params, const ProbeGrid& grid) {
  return clamped_supremum(
      [&](double x) { return drift_f_derivative(params, x); }, grid);
}

// ---------------------------------------------------------------------------

const char* to_string(JumpFamily family) noexcept {
  switch (family) {
    case JumpFamily::Linear: return "linear";
    case JumpFamily::Sine: return "sine";
    case JumpFamily::Rational: return "rational";
    case JumpFamily::Zero: return "zero";
    case JumpFamily::Custom: return "custom";
  }
  return "?";
}

JumpCoefficient::JumpCoefficient(JumpFamily family, double varrho,
                                 std::string name, Fn eval, Fn deriv)
    : family_(family),
      varrho_(varrho),
      name_(std::move(name)),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)) {}

JumpCoefficient JumpCoefficient::linear(double varrho) {
  return {JumpFamily::Linear, varrho, "linear",
          [varrho](double x) { return varrho * x; },
          [varrho](double) { return varrho; }};
}

JumpCoefficient JumpCoefficient::sine(double varrho) {
  return {JumpFamily::Sine, varrho, "sine",
          [varrho](double x) { return varrho * std::sin(x); },
          [varrho](double x) { return varrho * std::cos(x); }};
}

JumpCoefficient JumpCoefficient::rational(double varrho) {
  return {JumpFamily::Rational, varrho, "rational",
          [varrho](double x) { return varrho * x / (1.0 + x); },
          [varrho](double x) { return varrho / ((1.0 + x) * (1.0 + x)); }};
}

JumpCoefficient JumpCoefficient::zero() {
  return {JumpFamily::Zero, 0.0, "zero", [](double) { return 0.0; },
          [](double) { return 0.0; }};
}

JumpCoefficient JumpCoefficient::custom(std::string name, Fn eval, Fn deriv) {
  if (!eval || !deriv) {
    throw Error(ErrorKind::Config, "custom jump coefficient needs h and h'");
  }
  return {JumpFamily::Custom, 0.0, std::move(name), std::move(eval),
          std::move(deriv)};
}

JumpCoefficient JumpCoefficient::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  if (family == "zero" && colon == std::string::npos) return zero();
  if (colon == std::string::npos) {
    throw Error(ErrorKind::Config,
                fmt::format("jump spec '{}' must look like family:value", spec));
  }
  const std::string value_text = spec.substr(colon + 1);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(value_text, &used);
    if (used != value_text.size()) throw std::invalid_argument(value_text);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config,
                fmt::format("jump spec '{}' has a non-numeric parameter", spec));
  }
  if (family == "linear") return linear(value);
  if (family == "sine") return sine(value);
  if (family == "rational") return rational(value);
  throw Error(ErrorKind::Config,
              fmt::format("unknown jump family '{}' (linear, sine, rational, zero)",
                          family));
}

std::string JumpCoefficient::describe() const {
  switch (family_) {
    case JumpFamily::Zero: return "zero";
    case JumpFamily::Custom: return "custom:" + name_;
    default: return fmt::format("{}:{}", to_string(family_), varrho_);
  }
}

JumpBounds sample_jump_bounds(const JumpCoefficient& h, double rho,
                              const ProbeGrid& grid) {
  const double log_lo = std::log(grid.lo);
  const double log_step = (std::log(grid.hi) - log_lo) / (grid.points - 1);
  JumpBounds b;
  b.sampled_only = true;
  b.r = std::numeric_limits<double>::infinity();
  b.mu1 = std::numeric_limits<double>::infinity();
  b.mu2 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.points; ++i) {
    const double x = std::exp(log_lo + log_step * i);
    const double hx = h(x);
    const double dh = h.derivative(x);
    const double ratio = 1.0 + hx / x;
    b.mu = std::max(b.mu, std::abs(dh));
    b.r = std::min(b.r, ratio);
    const double band = ratio > 0.0 ? std::pow(ratio, -rho) * (1.0 + dh)
                                    : -std::numeric_limits<double>::infinity();
    b.mu1 = std::min(b.mu1, band);
    b.mu2 = std::max(b.mu2, band);
  }
  return b;
}

JumpBounds validate_jump(const JumpCoefficient& h, const ModelParams& params,
                         JumpRequirement requirement, const ProbeGrid& grid) {
  const double rho = params.rho;
  const double k = h.parameter();
  JumpBounds b;
  switch (h.family()) {
    case JumpFamily::Linear:
      if (!(k > -1.0)) {
        throw Error(ErrorKind::Validation,
                    fmt::format("growth assumption x + h(x) >= r x violated: linear jump needs "
                                "varrho > -1 (x + h(x) = {}x)",
                                1.0 + k));
      }
      b.mu = std::abs(k);
      b.r = 1.0 + k;
      b.mu1 = b.mu2 = std::pow(1.0 + k, 1.0 - rho);
      break;
    case JumpFamily::Zero:
      b.mu = 0.0;
      b.r = 1.0;
      b.mu1 = b.mu2 = 1.0;
      break;
    case JumpFamily::Sine: {
      const double r_lo = k >= 0.0 ? 1.0 + k * kSincMin : 1.0 + k;
      const double r_hi = k >= 0.0 ? 1.0 + k : 1.0 + k * kSincMin;
      b = bounds_from_envelope(r_lo, r_hi, -std::abs(k), std::abs(k), rho);
      break;
    }
    case JumpFamily::Rational:
      b = bounds_from_envelope(std::min(1.0, 1.0 + k), std::max(1.0, 1.0 + k),
                               std::min(0.0, k), std::max(0.0, k), rho);
      break;
    case JumpFamily::Custom: {
      b = sample_jump_bounds(h, rho, grid);
      // Locate the first offending probe point for the message.
      const double log_lo = std::log(grid.lo);
      const double log_step = (std::log(grid.hi) - log_lo) / (grid.points - 1);
      for (int i = 0; i < grid.points; ++i) {
        const double x = std::exp(log_lo + log_step * i);
        const double ratio = 1.0 + h(x) / x;
        if (!(ratio > 0.0)) {
          throw Error(ErrorKind::Validation,
                      fmt::format("growth assumption x + h(x) >= r x violated at x = {}: x + h(x) "
                                  "= {} is not positive",
                                  x, ratio * x));
        }
        const double band = std::pow(ratio, -rho) * (1.0 + h.derivative(x));
        if (requirement == JumpRequirement::GrowthAndBand &&
            !(band > 0.0 && std::isfinite(band))) {
          throw Error(ErrorKind::Validation,
                      fmt::format("band assumption (1 + h(x)/x)^-rho (1 + h'(x)) > 0 violated at x = {}: band "
                                  "expression = {}",
                                  x, band));
        }
      }
      return b;
    }
  }

  if (!b.growth_ok()) {
    throw Error(ErrorKind::Validation,
                fmt::format("growth assumption x + h(x) >= r x violated: {} gives r = {} <= 0",
                            h.describe(), b.r));
  }
  if (requirement == JumpRequirement::GrowthAndBand && !b.band_ok()) {
    throw Error(ErrorKind::Validation,
                fmt::format("band assumption (1 + h(x)/x)^-rho (1 + h'(x)) > 0 violated: {} gives band [{}, {}] "
                            "with lower end not positive",
                            h.describe(), b.mu1, b.mu2));
  }
  return b;
}

}  // namespace jumpsde
