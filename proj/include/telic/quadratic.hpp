#pragma once

#include <optional>
#include <string>
#include <utility>

#include "telic/dyadic.hpp"

namespace telic {

// Exact quadratic irrational (a + b*sqrt(D)) / c with integer a, b, c; c > 0,
// gcd(a, b, c) = 1, b != 0, D >= 2 not a perfect square. Values are genuinely
// irrational, so rounding against dyadic boundaries never ties.
class QuadIrr {
  public:
    QuadIrr(BigInt a, BigInt b, BigInt c, BigInt D);

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    const BigInt& c() const { return c_; }
    const BigInt& D() const { return D_; }

    // Exact sign of (value - q). Never returns 0.
    int compare_to_rational(const Rational& q) const;

    BigInt floor() const;

    // value + q, value * q (q rational), exact.
    QuadIrr add_rational(const Rational& q) const;
    QuadIrr mul_rational(const Rational& q) const;
    QuadIrr negate() const;

    // value + other, exact; requires the same radicand D. The sum may be
    // rational (b terms cancel), reported through the second result slot.
    std::pair<std::optional<QuadIrr>, std::optional<Rational>> add(const QuadIrr& other) const;

    // Reduced into [0, 1).
    QuadIrr mod1() const { return add_rational(Rational(-floor())); }

    // Dyadic z with |z - value| <= 2^-w, deterministic.
    Dyadic approx(unsigned w) const;

    std::string to_string() const;

  private:
    BigInt a_, b_, c_, D_;
    void normalize();
};

// floor(sqrt(n)) for n >= 0.
BigInt isqrt(const BigInt& n);

bool is_perfect_square(const BigInt& n);

// Nearest circle grid index at precision r to an irrational value (exact; no
// ties can occur).
BigInt round_circle_irrational(const QuadIrr& v, unsigned r);

}  // namespace telic
