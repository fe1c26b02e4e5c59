#include "jumpsde/transform.hpp"

#include <cmath>

#include <fmt/format.h>

#include "jumpsde/error.hpp"

namespace jumpsde {

namespace {

double positive_power(double base, double exponent, const char* what) {
  if (!(base > 0.0)) {
    throw Error(ErrorKind::Domain,
                fmt::format("{} requires a positive argument, got {}", what, base));
  }
  const double out = std::pow(base, exponent);
  if (!(out > 0.0) || std::isinf(out)) {
    throw Error(ErrorKind::Range,
                fmt::format("{}: {}^{} leaves the positive reals", what, base,
                            exponent));
  }
  return out;
}

}  // namespace

double lamperti_forward(double rho, double x) {
  return positive_power(x, 1.0 - rho, "lamperti_forward");
}

double lamperti_inverse(double rho, double z) {
  return positive_power(z, 1.0 / (1.0 - rho), "lamperti_inverse");
}

double jump_map_z(const ModelParams& params, const JumpCoefficient& h, double z) {
  const double x = lamperti_inverse(params.rho, z);
  const double landed = x + h(x);
  if (!(landed > 0.0)) {
    throw Error(ErrorKind::Domain,
                fmt::format("jump from x = {} lands at {} <= 0 ({})", x, landed,
                            h.describe()));
  }
  return lamperti_forward(params.rho, landed);
}

}  // namespace jumpsde
