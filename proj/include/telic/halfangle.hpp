#pragma once

#include "telic/dyadic.hpp"

namespace telic {

// pi as a dyadic with |result - pi| <= 2^-p (Machin series, certified tails).
Dyadic pi_dyadic(unsigned p);

// cos(t) for dyadic t in [0, 4] with |result - cos t| <= 2^-p.
Dyadic cos_certified(const Dyadic& t, unsigned p);

// sin^2(pi x / 2) for x in [0, 1], certified within 2^-w, clamped to [0, 1].
Dyadic half_angle_eval(const Dyadic& x, unsigned w);

// Monotone bisection inverse on [0, 1]: returns y with
// |sin^2(pi y / 2) - v| <= 2^-w. Near v = 0 or 1 the argument itself is
// ill-conditioned, so the contract is on the residual, not on |y - y*|.
Dyadic half_angle_inverse(const Dyadic& v, unsigned w);

}  // namespace telic
