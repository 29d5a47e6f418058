#pragma once

#include <optional>
#include <string>
#include <variant>

#include "telic/grid.hpp"
#include "telic/quadratic.hpp"

namespace telic {

enum class SystemKind { Doubling, Tent, Logistic, Rotation, AffineQuadratic };

using RotationAngle = std::variant<Rational, QuadIrr>;

// One-dimensional map catalog:
//   doubling          x -> 2x mod 1              on the circle
//   tent              x -> min(2x, 2-2x)         on [0,1]
//   logistic          x -> lambda x (1-x)        on [0,1], 0 < lambda <= 4
//   rotation          x -> x + alpha mod 1       on the circle (invertible)
//   affine_quadratic  y -> y^2 + c               on a forward-invariant [lo,hi]
struct SystemSpec {
    SystemKind kind;
    SpaceSpec space;
    Rational lambda;       // logistic
    RotationAngle alpha;   // rotation, reduced into [0,1)
    Rational qc;           // affine_quadratic constant

    static SystemSpec doubling();
    static SystemSpec tent();
    static SystemSpec logistic(const Rational& lambda);
    static SystemSpec rotation(const Rational& alpha);
    static SystemSpec rotation(const QuadIrr& alpha);
    static SystemSpec affine_quadratic(const Rational& c, const Dyadic& lo, const Dyadic& hi);

    bool invertible() const { return kind == SystemKind::Rotation; }
    bool rotation_is_rational() const;

    // Upper Lipschitz bound as a dyadic (exact for the shipped catalog).
    Dyadic lipschitz() const;

    std::string id() const;
};

// One exact step. Throws not_exact_error when the map value is not rational
// (irrational rotation).
Rational step_exact(const SystemSpec& spec, const Rational& x);

// One step within 2^-w of T(x) (circle metric on circle axes). Values that
// are exactly representable within precision w+1 pass through unchanged.
Dyadic step_approx(const SystemSpec& spec, const Dyadic& x, unsigned w);

// Inverse step for invertible systems, same tolerance contract.
Rational step_inverse_exact(const SystemSpec& spec, const Rational& x);
Dyadic step_inverse_approx(const SystemSpec& spec, const Dyadic& x, unsigned w);

// Exact k-fold rotation orbit value x0 + k*alpha mod 1 (rational or quadratic
// irrational depending on alpha); k may be negative.
std::variant<Rational, QuadIrr> rotation_orbit_value(const SystemSpec& spec, const Rational& x0, long k);

// Fractional part helper shared by the circle maps.
Rational frac1(const Rational& x);

}  // namespace telic
