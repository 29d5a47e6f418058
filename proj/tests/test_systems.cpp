#include <doctest.h>

#include <random>

#include "telic/systems.hpp"

using namespace telic;

namespace {

const QuadIrr sqrt2_minus_1 = QuadIrr(0, 1, 1, 2).mod1();

std::vector<SystemSpec> exact_catalog() {
    return {SystemSpec::doubling(), SystemSpec::tent(), SystemSpec::logistic(Rational(4)),
            SystemSpec::rotation(Rational(1, 4)),
            SystemSpec::affine_quadratic(Rational(-2), Dyadic(-2), Dyadic(2))};
}

}  // namespace

TEST_CASE("single exact steps match hand evaluation") {
    CHECK(step_exact(SystemSpec::logistic(Rational(4)), Rational(1, 4)) == Rational(3, 4));
    CHECK(step_exact(SystemSpec::logistic(Rational(4)), Rational(3, 8)) == Rational(15, 16));
    CHECK(step_exact(SystemSpec::tent(), Rational(3, 4)) == Rational(1, 2));
    CHECK(step_exact(SystemSpec::tent(), Rational(1, 4)) == Rational(1, 2));
    CHECK(step_exact(SystemSpec::doubling(), Rational(3, 8)) == Rational(3, 4));
    CHECK(step_exact(SystemSpec::doubling(), Rational(3, 4)) == Rational(1, 2));  // wraps
    CHECK(step_exact(SystemSpec::rotation(Rational(1, 4)), Rational(7, 8)) == Rational(1, 8));
    CHECK(step_exact(SystemSpec::affine_quadratic(Rational(-2), Dyadic(-2), Dyadic(2)),
                     Rational(1, 2)) == Rational(-7, 4));
}

TEST_CASE("irrational rotation refuses exact stepping and approximates instead") {
    SystemSpec rot = SystemSpec::rotation(sqrt2_minus_1);
    CHECK_THROWS_AS(step_exact(rot, Rational(0)), not_exact_error);

    Dyadic z = step_approx(rot, Dyadic(0), 10);
    // |z - (sqrt2 - 1)| <= 2^-10, certified by exact sign tests
    CHECK(sqrt2_minus_1.compare_to_rational(z.to_rational() - Rational(1, 1024)) > 0);
    CHECK(sqrt2_minus_1.compare_to_rational(z.to_rational() + Rational(1, 1024)) < 0);
    CHECK(z == step_approx(rot, Dyadic(0), 10));
}

TEST_CASE("exact values pass through step_approx unchanged") {
    CHECK(step_approx(SystemSpec::logistic(Rational(4)), Dyadic(BigInt(1), 1), 6) == Dyadic(1));
    CHECK(step_approx(SystemSpec::doubling(), Dyadic(BigInt(1), 2), 3) == Dyadic(BigInt(1), 1));
    CHECK(step_approx(SystemSpec::tent(), Dyadic(BigInt(3), 2), 8) == Dyadic(BigInt(1), 1));
}

TEST_CASE("inverse steps undo rotations") {
    CHECK(step_inverse_exact(SystemSpec::rotation(Rational(1, 4)), Rational(0)) == Rational(3, 4));
    SystemSpec r3 = SystemSpec::rotation(Rational(1, 3));
    CHECK(step_inverse_exact(r3, step_exact(r3, Rational(1, 5))) == Rational(1, 5));

    SystemSpec irr = SystemSpec::rotation(sqrt2_minus_1);
    Dyadic z = step_inverse_approx(irr, Dyadic(0), 8);
    // inverse of 0 is 2 - sqrt2 = 0.5857...
    QuadIrr want = QuadIrr(2, -1, 1, 2);
    CHECK(want.compare_to_rational(z.to_rational() - Rational(1, 256)) > 0);
    CHECK(want.compare_to_rational(z.to_rational() + Rational(1, 256)) < 0);

    CHECK_THROWS_AS(step_inverse_exact(SystemSpec::tent(), Rational(1, 2)), not_invertible_error);
    CHECK_THROWS_AS(step_inverse_exact(SystemSpec::doubling(), Rational(0)), not_invertible_error);
}

TEST_CASE("lipschitz bounds per kind") {
    CHECK(SystemSpec::doubling().lipschitz() == Dyadic(2));
    CHECK(SystemSpec::tent().lipschitz() == Dyadic(2));
    CHECK(SystemSpec::logistic(Rational(4)).lipschitz() == Dyadic(4));
    CHECK(SystemSpec::rotation(Rational(1, 7)).lipschitz() == Dyadic(1));
    CHECK(SystemSpec::rotation(sqrt2_minus_1).lipschitz() == Dyadic(1));
    CHECK(SystemSpec::affine_quadratic(Rational(-2), Dyadic(-2), Dyadic(2)).lipschitz() ==
          Dyadic(4));
}

TEST_CASE("forward invariance on sampled grid points") {
    std::mt19937_64 rng(40);
    for (const SystemSpec& sys : exact_catalog()) {
        const SpaceAxis& ax = sys.space.axes[0];
        Rational lo = ax.lo.to_rational(), hi = ax.hi.to_rational();
        for (int i = 0; i < 2000; ++i) {
            Rational x = lo + (hi - lo) * Rational(long(rng() % 4097), 4096);
            if (ax.kind == SpaceAxis::Kind::Circle) x = frac1(x);
            Rational y = step_exact(sys, x);
            if (ax.kind == SpaceAxis::Kind::Circle) {
                CHECK(y >= 0);
                CHECK(y < 1);
            } else {
                CHECK(y >= lo);
                CHECK(y <= hi);
            }
        }
    }
}

TEST_CASE("lipschitz bound is sound on sampled pairs") {
    std::mt19937_64 rng(41);
    for (const SystemSpec& sys : exact_catalog()) {
        const SpaceAxis& ax = sys.space.axes[0];
        Rational lo = ax.lo.to_rational(), hi = ax.hi.to_rational();
        Rational L = sys.lipschitz().to_rational();
        for (int i = 0; i < 1000; ++i) {
            Rational x = lo + (hi - lo) * Rational(long(rng() % 4097), 4096);
            Rational y = lo + (hi - lo) * Rational(long(rng() % 4097), 4096);
            Rational dxy = axis_distance(ax, x, y);
            Rational dTxy = axis_distance(ax, step_exact(sys, x), step_exact(sys, y));
            CHECK(dTxy <= L * dxy);
        }
    }
}

TEST_CASE("tent and doubling preserve the dyadic grid exactly") {
    for (unsigned r = 0; r <= 8; ++r) {
        for (BigInt m = 0; m <= pow2(r); ++m) {
            Rational x(m, pow2(r));
            for (const SystemSpec& sys : {SystemSpec::doubling(), SystemSpec::tent()}) {
                if (sys.kind == SystemKind::Doubling && m == pow2(r)) continue;  // circle
                Rational y = step_exact(sys, x);
                auto d = Dyadic::from_rational_exact(y);
                REQUIRE(d.has_value());
                CHECK(d->exponent() <= r);
            }
        }
    }
}

TEST_CASE("rotation orbit values are closed-form in k") {
    SystemSpec r4 = SystemSpec::rotation(Rational(1, 4));
    auto v = rotation_orbit_value(r4, Rational(1, 8), 3);
    CHECK(std::get<Rational>(v) == Rational(7, 8));
    auto back = rotation_orbit_value(r4, Rational(1, 8), -1);
    CHECK(std::get<Rational>(back) == Rational(7, 8));

    SystemSpec irr = SystemSpec::rotation(sqrt2_minus_1);
    auto w = rotation_orbit_value(irr, Rational(0), 2);
    // 2(sqrt2 - 1) = 2 sqrt2 - 2 = 0.8284..., already in [0,1)
    const QuadIrr& q = std::get<QuadIrr>(w);
    CHECK(q.compare_to_rational(Rational(828, 1000)) > 0);
    CHECK(q.compare_to_rational(Rational(829, 1000)) < 0);
}

TEST_CASE("system ids and the rational/irrational flag") {
    CHECK(SystemSpec::rotation(Rational(1, 4)).rotation_is_rational());
    CHECK(!SystemSpec::rotation(sqrt2_minus_1).rotation_is_rational());
    CHECK(SystemSpec::doubling().invertible() == false);
    CHECK(SystemSpec::rotation(Rational(1, 4)).invertible());
    CHECK(!SystemSpec::doubling().id().empty());
}
