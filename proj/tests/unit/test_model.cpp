#include <doctest.h>

#include <cmath>

#include "jumpsde/error.hpp"
#include "jumpsde/model.hpp"

using namespace jumpsde;

namespace {

// Central difference with a step scaled to z.
template <typename Fn>
double central_diff(Fn fn, double z) {
  const double h = 1e-5 * z;
  return (fn(z + h) - fn(z - h)) / (2 * h);
}

}  // namespace

TEST_CASE("parameter sets and regimes") {
  const auto one = parameter_set_one();
  CHECK(one.alpha_m1 == 2.0);
  CHECK(one.alpha2 == 5.0);
  CHECK(one.gamma == 3.0);
  CHECK(classify_regime(one) == Regime::Supercritical);
  CHECK(classify_regime(parameter_set_two()) == Regime::Supercritical);

  auto critical = one;
  critical.gamma = 2.0;
  critical.alpha2 = 10.0;
  const auto check = validate_params(critical);
  CHECK(check.regime == Regime::Critical);
  REQUIRE(check.critical_moment_cap);
  CHECK(*check.critical_moment_cap == doctest::Approx(10.0 - 1.5 + 1.5));
  CHECK(check.admits_moment(2.0));
  CHECK_FALSE(check.admits_moment(20.0));

  auto invalid = one;
  invalid.gamma = 1.8;
  CHECK(classify_regime(invalid) == Regime::Invalid);
  CHECK_THROWS_WITH_AS(validate_params(invalid), "Invalid regime: gamma < 2*rho - 1",
                       Error);

  auto bad = one;
  bad.rho = 1.0;
  CHECK_THROWS_AS(validate_params(bad), Error);
  bad = one;
  bad.alpha3 = 0.0;
  CHECK_THROWS_AS(validate_params(bad), Error);
  bad = one;
  bad.lambda = -1.0;
  CHECK_THROWS_AS(validate_params(bad), Error);
}

TEST_CASE("coefficients at x = 1") {
  CHECK(drift_f(parameter_set_one(), 1.0) == doctest::Approx(-2.5));
  CHECK(drift_f(parameter_set_two(), 1.0) == doctest::Approx(-2.5));
  CHECK(diffusion_g(parameter_set_one(), 4.0) == doctest::Approx(8.0));
  CHECK(transformed_drift(parameter_set_one(), 1.0) == doctest::Approx(1.625));
  CHECK(transformed_drift(parameter_set_two(), 1.0) == doctest::Approx(1.625));
  CHECK(transformed_drift_derivative(parameter_set_one(), 1.0) ==
        doctest::Approx(-12.125));
  CHECK(transformed_drift_second_derivative(parameter_set_one(), 1.0) ==
        doctest::Approx(13.75).epsilon(1e-12));
  CHECK_THROWS_AS(drift_f(parameter_set_one(), 0.0), Error);
  CHECK_THROWS_AS(transformed_drift(parameter_set_one(), -1.0), Error);
}

TEST_CASE("transformed drift derivatives match finite differences") {
  for (const auto& p : {parameter_set_one(), parameter_set_two()}) {
    for (double z : {0.05, 0.3, 0.9, 1.0, 1.7, 4.0, 20.0}) {
      const double d1 = central_diff([&](double t) { return transformed_drift(p, t); }, z);
      const double d2 = central_diff(
          [&](double t) { return transformed_drift_derivative(p, t); }, z);
      CHECK(transformed_drift_derivative(p, z) == doctest::Approx(d1).epsilon(1e-5));
      CHECK(transformed_drift_second_derivative(p, z) == doctest::Approx(d2).epsilon(1e-5));
    }
  }
}

TEST_CASE("Ito identity for the Lamperti drift") {
  // With u(x) = x^{1-rho}: F(u(x)) = u'(x) f(x) + u''(x) g(x)^2 / 2.
  for (const auto& p : {parameter_set_one(), parameter_set_two()}) {
    for (double x : {0.1, 0.5, 1.0, 2.0, 7.5}) {
      const double d1 = (1 - p.rho) * std::pow(x, -p.rho);
      const double d2 = -p.rho * (1 - p.rho) * std::pow(x, -p.rho - 1);
      const double g = diffusion_g(p, x);
      const double ito = d1 * drift_f(p, x) + 0.5 * d2 * g * g;
      CHECK(transformed_drift(p, std::pow(x, 1 - p.rho)) ==
            doctest::Approx(ito).epsilon(1e-9));
    }
  }
}

TEST_CASE("one-sided Lipschitz constant") {
  CHECK(compute_q(parameter_set_one()) == 0.0);
  CHECK(compute_q(parameter_set_two()) == 0.0);
  // Unclamped suprema from the high-precision oracle.
  const auto one = parameter_set_one();
  const double sup1 = clamped_supremum(
      [&](double z) { return transformed_drift_derivative(one, z) + 20.0; });
  CHECK(sup1 - 20.0 == doctest::Approx(-11.634368020611849).epsilon(1e-9));
  const auto two = parameter_set_two();
  const double sup2 = clamped_supremum(
      [&](double z) { return transformed_drift_derivative(two, z) + 20.0; });
  CHECK(sup2 - 20.0 == doctest::Approx(-4.284770496460717).epsilon(1e-9));

  auto invalid = one;
  invalid.gamma = 1.8;
  CHECK_THROWS_AS(compute_q(invalid), Error);
}

TEST_CASE("jump coefficient parsing") {
  CHECK(JumpCoefficient::parse("linear:-0.5")(2.0) == doctest::Approx(-1.0));
  CHECK(JumpCoefficient::parse("linear:-0.5").describe() == "linear:-0.5");
  CHECK(JumpCoefficient::parse("sine:1")(1.0) == doctest::Approx(std::sin(1.0)));
  CHECK(JumpCoefficient::parse("rational:0.3")(1.0) == doctest::Approx(0.15));
  CHECK(JumpCoefficient::parse("zero")(3.0) == 0.0);
  CHECK(JumpCoefficient::parse("zero").family() == JumpFamily::Zero);
  CHECK_THROWS_AS(JumpCoefficient::parse("cubic:1"), Error);
  CHECK_THROWS_AS(JumpCoefficient::parse("linear:abc"), Error);
  CHECK_THROWS_AS(JumpCoefficient::parse("linear"), Error);
}

TEST_CASE("jump bounds") {
  const auto p = parameter_set_one();
  auto b = validate_jump(JumpCoefficient::linear(-0.5), p);
  CHECK(b.mu == doctest::Approx(0.5));
  CHECK(b.r == doctest::Approx(0.5));
  CHECK(b.mu1 == doctest::Approx(std::sqrt(2.0)));
  CHECK(b.mu2 == doctest::Approx(std::sqrt(2.0)));

  b = validate_jump(JumpCoefficient::linear(1.0), p);
  CHECK(b.mu == doctest::Approx(1.0));
  CHECK(b.r == doctest::Approx(2.0));
  CHECK(b.mu1 == doctest::Approx(std::pow(2.0, -0.5)));

  b = validate_jump(JumpCoefficient::zero(), p);
  CHECK(b.mu == 0.0);
  CHECK(b.r == 1.0);
  CHECK(b.mu1 == 1.0);
  CHECK(b.mu2 == 1.0);

  CHECK_THROWS_AS(validate_jump(JumpCoefficient::linear(-1.5), p), Error);
  CHECK_THROWS_AS(validate_jump(JumpCoefficient::linear(-1.0), p), Error);

  // sin x keeps x + h(x) > 0 but its band touches zero.
  const auto sine = JumpCoefficient::sine(1.0);
  CHECK_NOTHROW(validate_jump(sine, p, JumpRequirement::GrowthOnly));
  CHECK_THROWS_AS(validate_jump(sine, p, JumpRequirement::GrowthAndBand), Error);
  b = validate_jump(sine, p, JumpRequirement::GrowthOnly);
  CHECK(b.r == doctest::Approx(1.0 - 0.21723362821122166).epsilon(1e-9));
  CHECK_FALSE(b.band_ok());
  CHECK(validate_jump(JumpCoefficient::sine(0.5), p).band_ok());
}

TEST_CASE("sampled bounds for custom coefficients agree with closed forms") {
  const auto custom = JumpCoefficient::custom(
      "half", [](double x) { return -0.5 * x; }, [](double) { return -0.5; });
  const auto b = sample_jump_bounds(custom, 1.5);
  CHECK(b.sampled_only);
  CHECK(b.r == doctest::Approx(0.5));
  CHECK(b.mu1 == doctest::Approx(std::sqrt(2.0)));
}
