#pragma once

// Ait-Sahalia-type short-rate model with Poisson jumps:
//
//   dX = (a_{-1}/X - a_0 + a_1 X - a_2 X^gamma) dt + a_3 X^rho dW + h(X-) dN
//
// together with the drift of the Lamperti-transformed process Z = X^(1-rho),
// its derivatives, and the assumption/regime gates that the schemes rely on.

#include <functional>
#include <optional>
#include <string>

namespace jumpsde {

struct ModelParams {
  double alpha_m1 = 0.0;  // coefficient of 1/x
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;  // volatility scale
  double gamma = 0.0;   // drift nonlinearity exponent
  double rho = 0.0;     // diffusion exponent
  double lambda = 0.0;  // jump intensity (jumps per unit time)
  double x0 = 1.0;
  double T = 1.0;
};

// Parameter sets I and II of the reference experiments (x0 = 1, T = 1).
// lambda is left at 0 and is chosen per experiment.
ModelParams parameter_set_one();
ModelParams parameter_set_two();

enum class Regime { Supercritical, Critical, Invalid };

const char* to_string(Regime regime) noexcept;

// gamma is compared with 2*rho - 1 up to a relative tolerance of 1e-12 so
// that decimal inputs such as rho = 1.5, gamma = 2 classify as Critical.
Regime classify_regime(const ModelParams& params) noexcept;

struct RegimeCheck {
  Regime regime = Regime::Invalid;
  // alpha2/alpha3^2 - rho + 3/2; moments E[sup |X|^p] are finite for p below
  // this cap in the Critical regime. Empty for Supercritical.
  std::optional<double> critical_moment_cap;

  // Whether a p-th moment claim is covered by the regime.
  bool admits_moment(double p) const noexcept;
};

// Throws Error(Validation) on non-positive constants, gamma/rho <= 1,
// lambda < 0, an Invalid regime, or a Critical cap <= 1.
RegimeCheck validate_params(const ModelParams& params);

// Original coefficients. Throw Error(Domain) for x <= 0.
double drift_f(const ModelParams& params, double x);
double diffusion_g(const ModelParams& params, double x);
double drift_f_derivative(const ModelParams& params, double x);

// Drift F of dZ = F(Z) dt + (1-rho) a_3 dW + jump, with first and second
// derivatives. Throw Error(Domain) for z <= 0.
double transformed_drift(const ModelParams& params, double z);
double transformed_drift_derivative(const ModelParams& params, double z);
double transformed_drift_second_derivative(const ModelParams& params, double z);

// Log-spaced probe window used by the numeric sup searches and by the
// sampled assumption checks.
struct ProbeGrid {
  double lo = 1e-6;
  double hi = 1e6;
  int points = 2048;
};

// max(0, sup_{z>0} fn(z)) estimated on `grid`, then refined by golden-section
// search around the best grid point until the bracket is below 1e-10
// relative. `fn` must be smooth with fn -> -inf at both ends of the window.
double clamped_supremum(const std::function<double(double)>& fn,
                        const ProbeGrid& grid = {});

// One-sided Lipschitz constant Q of F: F'(z) <= Q for all z > 0.
// Throws Error(Validation) for an Invalid regime.
double compute_q(const ModelParams& params, const ProbeGrid& grid = {});

// Same construction for the original drift f; guards the X-space implicit
// solve of the baseline scheme.
double compute_drift_q(const ModelParams& params, const ProbeGrid& grid = {});

// ---------------------------------------------------------------------------
// Jump coefficient h

enum class JumpFamily { Linear, Sine, Rational, Zero, Custom };

const char* to_string(JumpFamily family) noexcept;

class JumpCoefficient {
 public:
  using Fn = std::function<double(double)>;

  static JumpCoefficient linear(double varrho);    // h(x) = varrho * x
  static JumpCoefficient sine(double varrho);      // h(x) = varrho * sin x
  static JumpCoefficient rational(double varrho);  // h(x) = varrho * x / (1+x)
  static JumpCoefficient zero();
  static JumpCoefficient custom(std::string name, Fn eval, Fn deriv);

  // Parses "linear:-0.5", "sine:1", "rational:0.3", "zero".
  static JumpCoefficient parse(const std::string& spec);

  double operator()(double x) const { return eval_(x); }
  double derivative(double x) const { return deriv_(x); }

  JumpFamily family() const noexcept { return family_; }
  double parameter() const noexcept { return varrho_; }

  // Round-trips through parse() for the built-in families.
  std::string describe() const;

 private:
  JumpCoefficient(JumpFamily family, double varrho, std::string name, Fn eval,
                  Fn deriv);

  JumpFamily family_;
  double varrho_;
  std::string name_;
  Fn eval_;
  Fn deriv_;
};

// Constants of the two jump assumptions:
//   |h'(x)| <= mu,  x + h(x) >= r x                          (growth)
//   (1 + h(x)/x)^(-rho) (1 + h'(x)) in [mu1, mu2]            (band)
struct JumpBounds {
  double mu = 0.0;
  double r = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  bool sampled_only = false;  // true when derived from probe points only

  bool growth_ok() const noexcept { return r > 0.0; }
  bool band_ok() const noexcept { return mu1 > 0.0 && mu2 >= mu1; }
};

enum class JumpRequirement {
  GrowthOnly,       // enough for well-posedness and positivity
  GrowthAndBand,    // needed for the order-one convergence statement
};

// Sampled evidence only: min/max of the assumption expressions over a
// log-spaced grid. Never throws on violations; callers inspect the result.
JumpBounds sample_jump_bounds(const JumpCoefficient& h, double rho,
                              const ProbeGrid& grid = {1e-6, 1e6, 512});

// Closed forms for built-in families, sampled evidence for Custom. Throws
// Error(Validation) naming the failed assumption (and the probe point for
// sampled checks) when a required assumption does not hold.
JumpBounds validate_jump(const JumpCoefficient& h, const ModelParams& params,
                         JumpRequirement requirement =
                             JumpRequirement::GrowthAndBand,
                         const ProbeGrid& grid = {1e-6, 1e6, 512});

}  // namespace jumpsde
