#pragma once

#include "jumpsde/model.hpp"

namespace jumpsde {

// z = x^(1-rho). Throws Error(Domain) for x <= 0 and Error(Range) when the
// result under/overflows out of (0, inf).
double lamperti_forward(double rho, double x);

// x = z^(1/(1-rho)); same error contract as lamperti_forward.
double lamperti_inverse(double rho, double z);

// Post-jump state in Z-space: (x + h(x))^(1-rho) with x = z^(1/(1-rho)).
// Throws Error(Domain) if x + h(x) <= 0.
double jump_map_z(const ModelParams& params, const JumpCoefficient& h, double z);

}  // namespace jumpsde
