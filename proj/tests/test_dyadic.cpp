#include <doctest.h>

#include <random>

#include "telic/dyadic.hpp"

using namespace telic;

namespace {

Dyadic random_dyadic(std::mt19937_64& rng, unsigned max_bits) {
    unsigned bits = 1 + unsigned(rng() % max_bits);
    BigInt m = 0;
    for (unsigned i = 0; i < bits; i += 32) m = (m << 32) | BigInt(std::uint32_t(rng()));
    if (rng() & 1) m = -m;
    return Dyadic(m, unsigned(rng() % 64));
}

}  // namespace

TEST_CASE("dyadic canonical form holds after every constructor and operation") {
    CHECK(Dyadic(BigInt(4), 2) == Dyadic(1));           // 4/4 = 1
    CHECK(Dyadic(BigInt(4), 2).exponent() == 0);
    CHECK(Dyadic(BigInt(6), 3).mantissa() == 3);        // 6/8 = 3/4
    CHECK(Dyadic(BigInt(6), 3).exponent() == 2);
    CHECK(Dyadic(BigInt(0), 17) == Dyadic(0));
    CHECK(Dyadic(BigInt(0), 17).exponent() == 0);

    std::mt19937_64 rng(20240811);
    for (int i = 0; i < 500; ++i) {
        Dyadic a = random_dyadic(rng, 128), b = random_dyadic(rng, 128);
        for (const Dyadic& v : {a + b, a - b, a * b, -a}) {
            CHECK((v.exponent() == 0 || (v.mantissa() & 1) == 1));
        }
    }
}

TEST_CASE("dyadic arithmetic satisfies exact ring identities on wide mantissas") {
    std::mt19937_64 rng(513);
    for (int i = 0; i < 300; ++i) {
        Dyadic a = random_dyadic(rng, 512), b = random_dyadic(rng, 512), c = random_dyadic(rng, 512);
        CHECK((a + b) - b == a);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a - a == Dyadic(0));
        CHECK(a * Dyadic(1) == a);
        CHECK(a.to_rational() + b.to_rational() == (a + b).to_rational());
        CHECK(a.to_rational() * b.to_rational() == (a * b).to_rational());
    }
}

TEST_CASE("mul_pow2 shifts exactly in both directions") {
    Dyadic x(BigInt(5), 3);  // 5/8
    CHECK(x.mul_pow2(3) == Dyadic(5));
    CHECK(x.mul_pow2(-2) == Dyadic(BigInt(5), 5));
    CHECK(x.mul_pow2(4).mul_pow2(-4) == x);
}

TEST_CASE("comparison agrees with rational order") {
    std::mt19937_64 rng(98);
    for (int i = 0; i < 200; ++i) {
        Dyadic a = random_dyadic(rng, 96), b = random_dyadic(rng, 96);
        CHECK((a < b) == (a.to_rational() < b.to_rational()));
        CHECK((a == b) == (a.to_rational() == b.to_rational()));
    }
}

TEST_CASE("floor and from_rational_exact") {
    CHECK(Dyadic(BigInt(7), 2).floor() == 1);    // 7/4
    CHECK(Dyadic(BigInt(-1), 2).floor() == -1);  // -1/4
    CHECK(Dyadic(BigInt(-8), 2).floor() == -2);
    CHECK(Dyadic::from_rational_exact(Rational(3, 8)).value() == Dyadic(BigInt(3), 3));
    CHECK(!Dyadic::from_rational_exact(Rational(1, 3)).has_value());
}

TEST_CASE("textual round trip m/2^q") {
    Dyadic x(BigInt(-13), 5);
    CHECK(x.to_string() == "-13/2^5");
    CHECK(Dyadic::from_string(x.to_string()) == x);
    CHECK(Dyadic::from_string("7") == Dyadic(7));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        Dyadic v = random_dyadic(rng, 200);
        CHECK(Dyadic::from_string(v.to_string()) == v);
    }
}

TEST_CASE("round_half_down takes the tie to the smaller integer") {
    CHECK(round_half_down(1, 2) == 0);
    CHECK(round_half_down(3, 2) == 1);
    CHECK(round_half_down(-1, 2) == -1);
    CHECK(round_half_down(5, 4) == 1);
    CHECK(round_half_down(7, 4) == 2);
    // against a plain nearest-integer oracle off ties
    for (long p = -40; p <= 40; ++p) {
        for (long q : {1L, 3L, 5L, 7L}) {
            long lo = (p >= 0 ? p / q : -((-p + q - 1) / q));
            BigInt got = round_half_down(p, q);
            CHECK(got >= lo);
            CHECK(got <= lo + 1);
            // |got*q - p| minimal
            BigInt e = abs(got * q - p);
            CHECK(e * 2 <= q);
        }
    }
}

TEST_CASE("floor_div and floor_mod round toward minus infinity") {
    CHECK(floor_div(7, 2) == 3);
    CHECK(floor_div(-7, 2) == -4);
    CHECK(floor_mod(-7, 2) == 1);
    CHECK(floor_div(-8, 2) == -4);
    for (long a = -20; a <= 20; ++a)
        for (long b : {2L, 3L, 7L}) {
            BigInt q = floor_div(a, b), r = floor_mod(a, b);
            CHECK(q * b + r == a);
            CHECK(r >= 0);
            CHECK(r < b);
        }
}

TEST_CASE("parse_rational accepts p/q and plain integers") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-5") == Rational(-5));
    CHECK(rational_to_string(Rational(6, 8)) == "3/4");
    CHECK_THROWS_AS(parse_rational("1/0"), data_error);
}
