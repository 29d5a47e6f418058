#include "telic/discretize.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "telic/errors.hpp"
#include "telic/halfangle.hpp"
#include "telic/quadratic.hpp"

namespace telic {

unsigned working_precision(const Dyadic& L, unsigned k, unsigned r) {
    if (k == 0) return r + 2;
    Dyadic lc = (L < Dyadic(2)) ? Dyadic(2) : L;
    const BigInt& m = lc.mantissa();
    unsigned q = lc.exponent();
    if (static_cast<std::uint64_t>(msb(m) + 1) * k > 4'000'000ull)
        throw resource_limit_error("working_precision: Lipschitz power too large");
    BigInt mk = boost::multiprecision::pow(m, k);
    unsigned t = ceil_log2(mk) - q * k;  // ceil(k * log2(lc)); lc >= 2 keeps this positive
    return r + 2 + t;
}

namespace {

// distance from x to the nearest rounding boundary (odd multiple of 2^-(r+1))
Dyadic boundary_distance(const Dyadic& x, unsigned r) {
    Dyadic t = x.mul_pow2(r + 1);
    BigInt f = t.floor();
    Dyadic frac = t - Dyadic(f, 0);
    Dyadic units = (floor_mod(f, 2) == 1) ? frac : Dyadic(1) - frac;
    return units.mul_pow2(-static_cast<long>(r) - 1);
}

bool exact_orbit_feasible(const SystemSpec& spec, const OrbitRequest& req, const ResourceLimits& limits) {
    switch (spec.kind) {
        case SystemKind::Doubling:
        case SystemKind::Tent:
            return true;
        case SystemKind::Rotation:
            return spec.rotation_is_rational();
        case SystemKind::Logistic:
        case SystemKind::AffineQuadratic: {
            if (req.k >= 48) return false;
            std::uint64_t b0 = static_cast<std::uint64_t>(msb(abs(req.start.coords[0]) + 1) + 1) + req.start.r;
            Rational p = (spec.kind == SystemKind::Logistic) ? spec.lambda : spec.qc;
            std::uint64_t bp = static_cast<std::uint64_t>(msb(abs(numerator(p)) + 1) + msb(denominator(p) + 1) + 2);
            BigInt need = BigInt(b0 + bp + 4) << req.k;  // numerator/denominator bits double per step
            return need <= limits.max_bits;
        }
    }
    return false;
}

}  // namespace

OrbitResult discretize_orbit(const SystemSpec& spec, const OrbitRequest& req, const ResourceLimits& limits) {
    const SpaceSpec& space = spec.space;
    if (space.dim() != 1) throw data_error("discretize_orbit: catalog systems are one-dimensional");
    if (!grid_point_valid(req.start, space)) throw data_error("discretize_orbit: start is not a grid point of the space");

    PrecisionTrace trace;
    trace.steps = req.k;

    if (exact_orbit_feasible(spec, req, limits)) {
        trace.exact = true;
        trace.w = req.r;
        trace.certified_error = Dyadic(0);
        Rational x = req.start.values()[0];
        for (unsigned i = 0; i < req.k; ++i) {
            x = step_exact(spec, x);
            if (msb(abs(numerator(x)) + 1) > 8 * limits.max_bits)
                throw internal_error("discretize_orbit: exact orbit outgrew its predicted budget");
        }
        GridPoint out = round_to_grid(std::vector<Rational>{x}, space, req.r);
        return {out, trace};
    }

    trace.exact = false;
    unsigned w = working_precision(spec.lipschitz(), req.k, req.r);
    if (w > limits.max_precision)
        throw resource_limit_error("discretize_orbit: working precision " + std::to_string(w) +
                                   " exceeds the precision limit");
    trace.w = w;

    Dyadic x = req.start.value(0);
    Dyadic err(0);
    const Dyadic step_err(1, w);
    const Dyadic lip = spec.lipschitz();
    for (unsigned i = 0; i < req.k; ++i) {
        x = step_approx(spec, x, w);
        err = lip * err + step_err;
    }
    trace.certified_error = err;
    if (req.k > 0 && Dyadic(1, req.r + 2) < err)
        throw internal_error("discretize_orbit: certified error exceeded 2^-(r+2)");

    BigInt m = round_axis(space.axes[0], x.to_rational(), req.r);
    trace.boundary_ambiguous = !(err < boundary_distance(x, req.r));
    return {GridPoint({m}, req.r), trace};
}

FunctionSpec FunctionSpec::affine(const Rational& a, const Rational& b, SpaceSpec src, SpaceSpec dst) {
    if (a == 0) throw data_error("affine function: zero slope");
    FunctionSpec f;
    f.kind = Kind::Affine;
    f.a = a;
    f.b = b;
    f.source = std::move(src);
    f.target = std::move(dst);
    return f;
}

FunctionSpec FunctionSpec::square(SpaceSpec src, SpaceSpec dst) {
    FunctionSpec f;
    f.kind = Kind::Square;
    f.source = std::move(src);
    f.target = std::move(dst);
    return f;
}

FunctionSpec FunctionSpec::map_power(const SystemSpec& s, long power) {
    if (power < 0 && !s.invertible()) throw not_invertible_error("map power: negative power of a non-invertible map");
    FunctionSpec f;
    f.kind = Kind::MapPower;
    f.map = s;
    f.power = power;
    f.source = s.space;
    f.target = s.space;
    return f;
}

FunctionSpec FunctionSpec::half_angle() {
    FunctionSpec f;
    f.kind = Kind::HalfAngle;
    f.source = SpaceSpec::unit_interval();
    f.target = SpaceSpec::unit_interval();
    return f;
}

FunctionSpec FunctionSpec::half_angle_inverse() {
    FunctionSpec f;
    f.kind = Kind::HalfAngleInverse;
    f.source = SpaceSpec::unit_interval();
    f.target = SpaceSpec::unit_interval();
    return f;
}

std::optional<Rational> FunctionSpec::eval_exact(const Rational& x) const {
    switch (kind) {
        case Kind::Affine:
            return a * x + b;
        case Kind::Square:
            return x * x;
        case Kind::MapPower: {
            if (map->kind == SystemKind::Rotation && !map->rotation_is_rational()) return std::nullopt;
            Rational v = x;
            for (long i = 0; i < (power < 0 ? -power : power); ++i)
                v = (power < 0) ? step_inverse_exact(*map, v) : step_exact(*map, v);
            return v;
        }
        case Kind::HalfAngle:
        case Kind::HalfAngleInverse:
            return std::nullopt;
    }
    return std::nullopt;
}

GridPoint discretize_function(const FunctionSpec& f, const GridPoint& x, unsigned l) {
    if (f.source.dim() != 1 || f.target.dim() != 1)
        throw data_error("discretize_function: one-dimensional functions only");
    if (!grid_point_valid(x, f.source)) throw data_error("discretize_function: input is not a grid point of the source");

    Rational v = x.values()[0];
    if (f.kind == FunctionSpec::Kind::MapPower && f.map->kind == SystemKind::Rotation &&
        !f.map->rotation_is_rational()) {
        auto val = rotation_orbit_value(*f.map, v, f.power);
        if (std::holds_alternative<Rational>(val))
            return GridPoint({round_axis(f.target.axes[0], std::get<Rational>(val), l)}, l);
        return GridPoint({round_circle_irrational(std::get<QuadIrr>(val), l)}, l);
    }
    if (auto y = f.eval_exact(v)) return GridPoint({round_axis(f.target.axes[0], *y, l)}, l);

    Dyadic xd = x.value(0);
    Dyadic y = (f.kind == FunctionSpec::Kind::HalfAngle) ? half_angle_eval(xd, l + 4) : half_angle_inverse(xd, l + 4);
    return GridPoint({round_axis(f.target.axes[0], y.to_rational(), l)}, l);
}

namespace {

// grid indices sampled by the validator: circles give [0, 2^r), intervals [lo, hi)
void half_open_range(const SpaceAxis& axis, unsigned r, BigInt& lo, BigInt& count) {
    if (axis.kind == SpaceAxis::Kind::Circle) {
        lo = 0;
        count = pow2(r);
        return;
    }
    lo = axis_index_lo(axis, r);
    BigInt hi = axis_index_hi(axis, r);
    count = hi - lo + 1;
    if (Dyadic(hi, r) == axis.hi) count -= 1;
}

void check_direction(const FunctionSpec& g, const FunctionSpec& g_inv, unsigned r, InversePairReport& report,
                     const char* label) {
    BigInt lo, count;
    half_open_range(g.source.axes[0], r, lo, count);
    for (BigInt i = 0; i < count; ++i) {
        GridPoint x({lo + i}, r);
        Rational xv = x.values()[0];
        bool ok = false;
        GridPoint back;
        std::string note = label;
        auto y = g.eval_exact(xv);
        std::optional<Rational> w = y ? g_inv.eval_exact(*y) : std::nullopt;
        try {
            if (y && w) {
                ok = (*w == xv);
                if (!ok) back = GridPoint({round_axis(g.source.axes[0], *w, r)}, r);
            } else {
                GridPoint z = discretize_function(g, x, r);
                back = discretize_function(g_inv, z, r);
                ok = (back.values()[0] == xv);
            }
        } catch (const data_error&) {
            ok = false;
            note += "; round trip left the space";
        }
        if (!ok) {
            report.passed = false;
            if (report.violations.size() < 32) report.violations.push_back({r, x, back, note});
        }
    }
}

}  // namespace

InversePairReport validate_inverse_pair(const FunctionSpec& f, const FunctionSpec& f_inv, unsigned r_max) {
    if (f.source.dim() != 1 || f.target.dim() != 1)
        throw data_error("validate_inverse_pair: one-dimensional functions only");
    InversePairReport report;
    for (unsigned r = 0; r <= r_max; ++r) {
        check_direction(f, f_inv, r, report, "f_inv(f(x)) != x");
        check_direction(f_inv, f, r, report, "f(f_inv(y)) != y");
    }
    return report;
}

}  // namespace telic
