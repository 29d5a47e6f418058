#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "telic/systems.hpp"

namespace telic {

struct ResourceLimits {
    std::uint64_t max_bits = std::uint64_t(1) << 20;  // exact-orbit mantissa budget
    unsigned max_precision = 1u << 16;                // working-precision cap
    std::uint64_t timeout_ms = 0;                     // 0 = no timeout
};

// Working precision for k iterations at output precision r under Lipschitz
// bound L: w = r + 2 + ceil(k * log2(max(L, 2))). The per-step error
// recurrence e' <= L e + 2^-w then keeps the accumulated error below 2^-(r+2).
unsigned working_precision(const Dyadic& L, unsigned k, unsigned r);

struct OrbitRequest {
    GridPoint start;
    unsigned k = 0;
    unsigned r = 0;  // output precision
};

struct PrecisionTrace {
    bool exact = true;
    unsigned w = 0;             // working precision (approx mode)
    unsigned steps = 0;
    Dyadic certified_error;     // exact replay of the error recurrence; 0 in exact mode
    bool boundary_ambiguous = false;  // approx value within certified error of a rounding boundary
};

struct OrbitResult {
    GridPoint point;
    PrecisionTrace trace;
};

// Computes D_r(T^k(x)) for a grid start x: bit-exact for doubling, tent,
// rational rotation, and polynomial kinds within the bit budget; otherwise
// iterates step_approx at the working precision and rounds once at the end,
// returning a grid point within 2^-r of T^k(x).
OrbitResult discretize_orbit(const SystemSpec& spec, const OrbitRequest& req,
                             const ResourceLimits& limits = {});

// Discretized one-dimensional functions between spaces.
struct FunctionSpec {
    enum class Kind { Affine, Square, MapPower, HalfAngle, HalfAngleInverse };
    Kind kind = Kind::Affine;
    Rational a = 1, b = 0;  // affine a*x + b
    std::optional<SystemSpec> map;  // map power
    long power = 1;                 // may be negative for invertible maps
    SpaceSpec source, target;

    static FunctionSpec affine(const Rational& a, const Rational& b, SpaceSpec src, SpaceSpec dst);
    static FunctionSpec square(SpaceSpec src, SpaceSpec dst);
    static FunctionSpec map_power(const SystemSpec& s, long power);
    static FunctionSpec half_angle();          // sin^2(pi x / 2): [0,1] -> [0,1]
    static FunctionSpec half_angle_inverse();

    // Exact value when the function is rational-closed-form on rational input.
    std::optional<Rational> eval_exact(const Rational& x) const;
};

// M_f at output precision l: rounds f(x) onto the target grid. Exact for
// affine maps with dyadic coefficients and for rational map powers.
GridPoint discretize_function(const FunctionSpec& f, const GridPoint& x, unsigned l);

struct InversePairViolation {
    unsigned r = 0;
    GridPoint x;       // input point
    GridPoint got;     // round trip result
    std::string note;
};

struct InversePairReport {
    bool passed = true;
    std::vector<InversePairViolation> violations;
};

// Exhaustively checks f_inv(f(x)) == x on source grids and f(f_inv(y)) == y on
// target grids for all precisions r <= r_max. Interval grids are sampled
// half-open [lo, hi). Violations are data, not errors.
InversePairReport validate_inverse_pair(const FunctionSpec& f, const FunctionSpec& f_inv, unsigned r_max);

}  // namespace telic
