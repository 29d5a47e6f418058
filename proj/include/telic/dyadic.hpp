#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "telic/errors.hpp"

namespace telic {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Floor division / modulus on BigInt (cpp_int's operator/ truncates toward zero).
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt floor_mod(const BigInt& a, const BigInt& b);

// Smallest t with 2^t >= x, for x >= 1.
unsigned ceil_log2(const BigInt& x);

BigInt pow2(unsigned k);

// A dyadic rational m / 2^q in canonical form: q == 0 or m odd.
// All arithmetic is exact; there is no rounding anywhere in this class.
class Dyadic {
  public:
    Dyadic() : num_(0), exp_(0) {}
    Dyadic(long v) : num_(v), exp_(0) {}  // NOLINT: implicit for literals
    Dyadic(BigInt mantissa, unsigned exponent) : num_(std::move(mantissa)), exp_(exponent) {
        canonicalize();
    }

    const BigInt& mantissa() const { return num_; }
    unsigned exponent() const { return exp_; }

    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    Dyadic operator-() const { return Dyadic(-num_, exp_); }
    Dyadic abs() const { return num_ < 0 ? -*this : *this; }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
    Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

    // Exact multiplication by 2^k (k may be negative).
    Dyadic mul_pow2(long k) const;

    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        return compare(a, b);
    }
    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exp_ == b.exp_ && a.num_ == b.num_;
    }

    static std::strong_ordering compare(const Dyadic& a, const Dyadic& b);

    Rational to_rational() const;
    BigInt floor() const;

    // Exact conversion; empty when the rational's denominator is not a power of two.
    static std::optional<Dyadic> from_rational_exact(const Rational& r);

    // Textual form "m/2^q"; parses that form as well as plain integers.
    std::string to_string() const;
    static Dyadic from_string(const std::string& s);

  private:
    BigInt num_;
    unsigned exp_;
    void canonicalize();
};

struct DyadicPoint {
    std::vector<Dyadic> coords;

    DyadicPoint() = default;
    explicit DyadicPoint(std::vector<Dyadic> c) : coords(std::move(c)) {}
    std::size_t dim() const { return coords.size(); }
};

// Parses "p/q" or "p" into an exact rational (q > 0 enforced).
Rational parse_rational(const std::string& s);
std::string rational_to_string(const Rational& r);

// Nearest integer to p/q with ties toward the smaller integer.
BigInt round_half_down(const BigInt& p, const BigInt& q);

}  // namespace telic
