#include "telic/systems.hpp"

#include <boost/multiprecision/integer.hpp>

namespace telic {

namespace {

BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

Dyadic dyadic_upper_bound(const Rational& x) {
    // Smallest precision-8 dyadic >= x; exact when x is dyadic at or below that.
    if (auto d = Dyadic::from_rational_exact(x)) {
        if (d->exponent() <= 8) return *d;
    }
    Rational t = x * pow2(8);
    return Dyadic(-floor_div(-num(t), den(t)), 8);
}

}  // namespace

Rational frac1(const Rational& x) {
    BigInt f = floor_div(num(x), den(x));
    return x - Rational(f);
}

SystemSpec SystemSpec::doubling() {
    return SystemSpec{SystemKind::Doubling, SpaceSpec::unit_circle(), 0, Rational(0), 0};
}

SystemSpec SystemSpec::tent() {
    return SystemSpec{SystemKind::Tent, SpaceSpec::unit_interval(), 0, Rational(0), 0};
}

SystemSpec SystemSpec::logistic(const Rational& lambda) {
    if (lambda <= 0 || lambda > 4)
        throw data_error("logistic: lambda must be in (0, 4] for [0,1] to be forward-invariant");
    return SystemSpec{SystemKind::Logistic, SpaceSpec::unit_interval(), lambda, Rational(0), 0};
}

SystemSpec SystemSpec::rotation(const Rational& alpha) {
    return SystemSpec{SystemKind::Rotation, SpaceSpec::unit_circle(), 0, frac1(alpha), 0};
}

SystemSpec SystemSpec::rotation(const QuadIrr& alpha) {
    return SystemSpec{SystemKind::Rotation, SpaceSpec::unit_circle(), 0, alpha.mod1(), 0};
}

SystemSpec SystemSpec::affine_quadratic(const Rational& c, const Dyadic& lo, const Dyadic& hi) {
    Rational l = lo.to_rational(), h = hi.to_rational();
    if (l >= h) throw data_error("affine_quadratic: domain needs lo < hi");
    Rational big = std::max(l * l, h * h);
    Rational small = (l <= 0 && h >= 0) ? Rational(0) : std::min(l * l, h * h);
    if (small + c < l || big + c > h)
        throw data_error("affine_quadratic: domain is not forward-invariant for this c");
    SystemSpec s{SystemKind::AffineQuadratic, SpaceSpec::interval(lo, hi), 0, Rational(0), c};
    return s;
}

bool SystemSpec::rotation_is_rational() const {
    return kind == SystemKind::Rotation && std::holds_alternative<Rational>(alpha);
}

Dyadic SystemSpec::lipschitz() const {
    switch (kind) {
        case SystemKind::Doubling:
        case SystemKind::Tent:
            return Dyadic(2);
        case SystemKind::Logistic:
            // sup |lambda (1 - 2x)| over [0,1] is lambda.
            return dyadic_upper_bound(lambda);
        case SystemKind::Rotation:
            return Dyadic(1);
        case SystemKind::AffineQuadratic: {
            Dyadic lo = space.axes[0].lo.abs(), hi = space.axes[0].hi.abs();
            Dyadic m = lo > hi ? lo : hi;
            return m.mul_pow2(1);  // sup |2y|
        }
    }
    throw internal_error("unknown system kind");
}

std::string SystemSpec::id() const {
    switch (kind) {
        case SystemKind::Doubling:
            return "doubling";
        case SystemKind::Tent:
            return "tent";
        case SystemKind::Logistic:
            return "logistic(" + rational_to_string(lambda) + ")";
        case SystemKind::Rotation:
            if (rotation_is_rational()) return "rotation(" + rational_to_string(std::get<Rational>(alpha)) + ")";
            return "rotation(" + std::get<QuadIrr>(alpha).to_string() + ")";
        case SystemKind::AffineQuadratic:
            return "affine_quadratic(" + rational_to_string(qc) + ",[" + space.axes[0].lo.to_string() + "," +
                   space.axes[0].hi.to_string() + "])";
    }
    throw internal_error("unknown system kind");
}

Rational step_exact(const SystemSpec& spec, const Rational& x) {
    switch (spec.kind) {
        case SystemKind::Doubling:
            return frac1(x * 2);
        case SystemKind::Tent:
            return x <= Rational(1, 2) ? Rational(x * 2) : Rational((1 - x) * 2);
        case SystemKind::Logistic:
            return spec.lambda * x * (1 - x);
        case SystemKind::Rotation:
            if (!spec.rotation_is_rational())
                throw not_exact_error("irrational rotation step is not rational; use step_approx");
            return frac1(x + std::get<Rational>(spec.alpha));
        case SystemKind::AffineQuadratic:
            return x * x + spec.qc;
    }
    throw internal_error("unknown system kind");
}

Dyadic step_approx(const SystemSpec& spec, const Dyadic& x, unsigned w) {
    const SpaceAxis& axis = spec.space.axes[0];
    if (spec.kind == SystemKind::Rotation && !spec.rotation_is_rational()) {
        const QuadIrr& alpha = std::get<QuadIrr>(spec.alpha);
        Dyadic y = x + alpha.approx(w + 2);
        // Reduce into [0,1), then snap to the circle grid at w+1.
        Rational yr = frac1(y.to_rational());
        BigInt m = round_axis(axis, yr, w + 1);
        return Dyadic(m, w + 1);
    }
    Rational v = step_exact(spec, x.to_rational());
    if (auto d = Dyadic::from_rational_exact(v)) {
        if (d->exponent() <= w + 1) return *d;
    }
    BigInt m = round_axis(axis, axis.kind == SpaceAxis::Kind::Circle ? frac1(v) : v, w + 1);
    return Dyadic(m, w + 1);
}

Rational step_inverse_exact(const SystemSpec& spec, const Rational& x) {
    if (spec.kind != SystemKind::Rotation) throw not_invertible_error("only rotations invert");
    if (!spec.rotation_is_rational())
        throw not_exact_error("irrational rotation inverse is not rational; use step_inverse_approx");
    return frac1(x - std::get<Rational>(spec.alpha));
}

Dyadic step_inverse_approx(const SystemSpec& spec, const Dyadic& x, unsigned w) {
    if (spec.kind != SystemKind::Rotation) throw not_invertible_error("only rotations invert");
    if (spec.rotation_is_rational()) {
        Rational v = frac1(x.to_rational() - std::get<Rational>(spec.alpha));
        if (auto d = Dyadic::from_rational_exact(v)) {
            if (d->exponent() <= w + 1) return *d;
        }
        BigInt m = round_axis(spec.space.axes[0], v, w + 1);
        return Dyadic(m, w + 1);
    }
    const QuadIrr& alpha = std::get<QuadIrr>(spec.alpha);
    Dyadic y = x - alpha.approx(w + 2);
    Rational yr = frac1(y.to_rational());
    BigInt m = round_axis(spec.space.axes[0], yr, w + 1);
    return Dyadic(m, w + 1);
}

std::variant<Rational, QuadIrr> rotation_orbit_value(const SystemSpec& spec, const Rational& x0, long k) {
    if (spec.kind != SystemKind::Rotation) throw internal_error("rotation_orbit_value on non-rotation");
    if (spec.rotation_is_rational()) return frac1(x0 + Rational(k) * std::get<Rational>(spec.alpha));
    if (k == 0) return frac1(x0);
    const QuadIrr& alpha = std::get<QuadIrr>(spec.alpha);
    return alpha.mul_rational(Rational(k)).add_rational(x0).mod1();
}

}  // namespace telic
