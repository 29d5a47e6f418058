#include <doctest.h>

#include "telic/discretize.hpp"

using namespace telic;

namespace {

const QuadIrr sqrt2_minus_1 = QuadIrr(0, 1, 1, 2).mod1();

GridPoint gp(long m, unsigned r) { return GridPoint({BigInt(m)}, r); }

// independent orbit oracle: exact rationals for exact kinds, closed-form
// irrational value for quadratic rotations
GridPoint oracle_orbit(const SystemSpec& sys, const GridPoint& start, unsigned k, unsigned r) {
    if (!sys.rotation_is_rational() && sys.kind == SystemKind::Rotation) {
        auto v = rotation_orbit_value(sys, start.values()[0], long(k));
        if (auto* q = std::get_if<QuadIrr>(&v)) return gp(long(round_circle_irrational(*q, r)), r);
        return round_to_grid({frac1(std::get<Rational>(v))}, sys.space, r);
    }
    Rational x = start.values()[0];
    for (unsigned i = 0; i < k; ++i) x = step_exact(sys, x);
    return round_to_grid({x}, sys.space, r);
}

}  // namespace

TEST_CASE("working precision formula") {
    CHECK(working_precision(Dyadic(2), 4, 4) == 10);
    CHECK(working_precision(Dyadic(4), 3, 2) == 10);
    CHECK(working_precision(Dyadic(1), 100, 8) == 110);  // max(L,2) clamp
    CHECK(working_precision(Dyadic(3), 2, 5) == 11);     // ceil(2 log2 3) = 4
}

TEST_CASE("discretized orbits of exact systems are bit-exact") {
    auto run = [](const SystemSpec& sys, const GridPoint& s, unsigned k, unsigned r) {
        return discretize_orbit(sys, OrbitRequest{s, k, r});
    };
    OrbitResult a = run(SystemSpec::doubling(), gp(4, 4), 3, 4);  // start 1/4
    CHECK(a.point == gp(0, 4));
    CHECK(a.trace.exact);
    CHECK(a.trace.certified_error == Dyadic(0));

    OrbitResult b = run(SystemSpec::logistic(Rational(4)), gp(16, 5), 2, 5);  // start 1/2
    CHECK(b.point == gp(0, 5));

    OrbitResult c = run(SystemSpec::rotation(Rational(1, 4)), gp(1, 3), 5, 3);  // 1/8 + 5/4
    CHECK(c.point == gp(3, 3));
}

TEST_CASE("irrational rotation orbit lands on the oracle's grid point") {
    SystemSpec rot = SystemSpec::rotation(sqrt2_minus_1);
    OrbitResult got = discretize_orbit(rot, OrbitRequest{gp(0, 3), 1, 3});
    CHECK(got.point == gp(3, 3));  // nearest eighth to 0.41421
    CHECK(!got.trace.exact);
    // k up to 6, several precisions, against the closed-form oracle; the
    // approximate orbit may legally differ by one grid step near a boundary
    for (unsigned r = 2; r <= 6; ++r) {
        for (unsigned k = 0; k <= 6; ++k) {
            OrbitResult res = discretize_orbit(rot, OrbitRequest{gp(0, r), k, r});
            GridPoint want = oracle_orbit(rot, gp(0, r), k, r);
            BigInt diff = res.point.coords[0] - want.coords[0];
            diff = floor_mod(diff, pow2(r));
            if (diff > pow2(r - 1)) diff = pow2(r) - diff;
            CHECK(diff <= (res.trace.boundary_ambiguous ? 1 : 0));
        }
    }
}

TEST_CASE("every catalog system agrees with the independent oracle") {
    std::vector<SystemSpec> catalog = {
        SystemSpec::doubling(), SystemSpec::tent(), SystemSpec::logistic(Rational(4)),
        SystemSpec::rotation(Rational(3, 8)),
        SystemSpec::affine_quadratic(Rational(-2), Dyadic(-2), Dyadic(2))};
    for (const SystemSpec& sys : catalog) {
        const unsigned r = 4;
        BigInt lo = axis_index_lo(sys.space.axes[0], r), hi = axis_index_hi(sys.space.axes[0], r);
        for (BigInt m = lo; m <= hi; ++m) {
            for (unsigned k = 0; k <= 6; ++k) {
                GridPoint s(std::vector<BigInt>{m}, r);
                OrbitResult res = discretize_orbit(sys, OrbitRequest{s, k, r});
                CHECK(res.point == oracle_orbit(sys, s, k, r));
            }
        }
    }
}

TEST_CASE("identical requests give identical results and traces") {
    SystemSpec rot = SystemSpec::rotation(sqrt2_minus_1);
    OrbitRequest req{gp(5, 6), 7, 6};
    OrbitResult a = discretize_orbit(rot, req), b = discretize_orbit(rot, req);
    CHECK(a.point == b.point);
    CHECK(a.trace.w == b.trace.w);
    CHECK(a.trace.certified_error == b.trace.certified_error);
}

TEST_CASE("approx traces certify the error recurrence below the budget") {
    SystemSpec rot = SystemSpec::rotation(sqrt2_minus_1);
    for (unsigned k : {1u, 4u, 9u}) {
        OrbitResult res = discretize_orbit(rot, OrbitRequest{gp(0, 5), k, 5});
        CHECK(!res.trace.exact);
        CHECK(res.trace.steps == k);
        // e_k <= 2^-(r+2)
        CHECK(res.trace.certified_error <= Dyadic(BigInt(1), 7));
    }
}

TEST_CASE("working precision cap raises a resource error") {
    ResourceLimits tight;
    tight.max_precision = 4;
    SystemSpec rot = SystemSpec::rotation(sqrt2_minus_1);
    CHECK_THROWS_AS(discretize_orbit(rot, OrbitRequest{gp(0, 6), 20, 6}, tight),
                    resource_limit_error);
}

TEST_CASE("discretize_function pins squares and affine maps") {
    SpaceSpec unit = SpaceSpec::unit_interval();
    FunctionSpec sq = FunctionSpec::square(unit, unit);
    CHECK(discretize_function(sq, gp(8, 4), 4) == gp(4, 4));    // (1/2)^2
    CHECK(discretize_function(sq, gp(3, 3), 2) == gp(1, 2));    // D_2(9/64) = 1/4

    FunctionSpec aff = FunctionSpec::affine(Rational(-4), Rational(2), unit,
                                            SpaceSpec::interval(Dyadic(-2), Dyadic(2)));
    CHECK(discretize_function(aff, gp(16, 6), 6) == gp(64, 6));  // 2 - 4/4 = 1
    CHECK(aff.eval_exact(Rational(1, 4)).value() == Rational(1));
}

TEST_CASE("validate_inverse_pair accepts true inverses") {
    SystemSpec r4 = SystemSpec::rotation(Rational(1, 4));
    InversePairReport rep =
        validate_inverse_pair(FunctionSpec::map_power(r4, 1), FunctionSpec::map_power(r4, -1), 6);
    CHECK(rep.passed);

    SpaceSpec unit = SpaceSpec::unit_interval(), wide = SpaceSpec::interval(Dyadic(-2), Dyadic(2));
    FunctionSpec f = FunctionSpec::affine(Rational(-4), Rational(2), unit, wide);
    FunctionSpec f_inv = FunctionSpec::affine(Rational(-1, 4), Rational(1, 2), wide, unit);
    CHECK(validate_inverse_pair(f, f_inv, 6).passed);
}

TEST_CASE("validate_inverse_pair reports the first collision of a non-injective map") {
    SpaceSpec unit = SpaceSpec::unit_interval();
    FunctionSpec tent = FunctionSpec::map_power(SystemSpec::tent(), 1);
    // x/2 is only the left inverse branch
    FunctionSpec half = FunctionSpec::affine(Rational(1, 2), Rational(0), unit, unit);
    InversePairReport rep = validate_inverse_pair(tent, half, 4);
    CHECK(!rep.passed);
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations.front().r == 2);
    CHECK(rep.violations.front().x == gp(3, 2));
}
