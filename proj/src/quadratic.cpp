#include "telic/quadratic.hpp"

#include <boost/multiprecision/integer.hpp>

#include <sstream>

namespace telic {

namespace {

BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

// Exact sign of A + B*sqrt(D), D >= 2 nonsquare. Zero is impossible for B != 0.
int sign_a_plus_b_sqrt(const BigInt& A, const BigInt& B, const BigInt& D) {
    if (B == 0) return A == 0 ? 0 : (A > 0 ? 1 : -1);
    if (B > 0) {
        if (A >= 0) return 1;
        // sign(B sqrt(D) - |A|): compare B^2 D with A^2
        return B * B * D > A * A ? 1 : -1;
    }
    return -sign_a_plus_b_sqrt(-A, -B, D);
}

}  // namespace

BigInt isqrt(const BigInt& n) {
    if (n < 0) throw internal_error("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

bool is_perfect_square(const BigInt& n) {
    if (n < 0) return false;
    BigInt s = isqrt(n);
    return s * s == n;
}

QuadIrr::QuadIrr(BigInt a, BigInt b, BigInt c, BigInt D)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), D_(std::move(D)) {
    if (c_ == 0) throw data_error("quadratic irrational: c must be nonzero");
    if (b_ == 0) throw data_error("quadratic irrational: b must be nonzero (value would be rational)");
    if (D_ < 2 || is_perfect_square(D_))
        throw data_error("quadratic irrational: D must be >= 2 and not a perfect square");
    normalize();
}

void QuadIrr::normalize() {
    if (c_ < 0) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
    }
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(a_ < 0 ? -a_ : a_, b_ < 0 ? -b_ : b_), c_);
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
    }
}

int QuadIrr::compare_to_rational(const Rational& q) const {
    // (a + b sqrt(D))/c - qn/qd  ~  sign of (a*qd - qn*c) + b*qd*sqrt(D)
    BigInt A = a_ * den(q) - num(q) * c_;
    BigInt B = b_ * den(q);
    int s = sign_a_plus_b_sqrt(A, B, D_);
    if (s == 0) throw internal_error("quadratic irrational compared equal to a rational");
    return s;
}

BigInt QuadIrr::floor() const {
    Dyadic d = approx(4);
    BigInt k = d.floor() - 1;
    // value in [d - 1/16, d + 1/16]; walk to the exact floor.
    while (compare_to_rational(Rational(k + 1)) > 0) ++k;
    if (compare_to_rational(Rational(k)) < 0)
        throw internal_error("quadratic irrational floor bracketing failed");
    return k;
}

QuadIrr QuadIrr::add_rational(const Rational& q) const {
    // (a + b sqrt D)/c + qn/qd = (a qd + qn c + b qd sqrt D) / (c qd)
    return QuadIrr(a_ * den(q) + num(q) * c_, b_ * den(q), c_ * den(q), D_);
}

QuadIrr QuadIrr::mul_rational(const Rational& q) const {
    if (q == 0) throw data_error("quadratic irrational: multiplying by 0 gives a rational");
    return QuadIrr(a_ * num(q), b_ * num(q), c_ * den(q), D_);
}

QuadIrr QuadIrr::negate() const { return QuadIrr(-a_, -b_, c_, D_); }

Dyadic QuadIrr::approx(unsigned w) const {
    BigInt babs = b_ < 0 ? -b_ : b_;
    unsigned p = w + 2 + ceil_log2(babs < 1 ? BigInt(1) : babs);
    // s <= sqrt(D) 2^p < s + 1, so |b s - b sqrt(D) 2^p| <= |b|.
    BigInt s = isqrt(D_ << (2 * p));
    BigInt N = (a_ << p) + b_ * s;
    BigInt Q = c_ << p;
    // Round N/Q to precision w+2: total error <= |b| 2^-p / c + 2^-(w+3) < 2^-w.
    BigInt m = round_half_down(N << (w + 2), Q);
    return Dyadic(m, w + 2);
}

std::pair<std::optional<QuadIrr>, std::optional<Rational>> QuadIrr::add(const QuadIrr& other) const {
    if (D_ != other.D_) throw data_error("QuadIrr::add: mismatched radicands");
    BigInt na = a_ * other.c_ + other.a_ * c_;
    BigInt nb = b_ * other.c_ + other.b_ * c_;
    BigInt nc = c_ * other.c_;
    if (nb == 0) return {std::nullopt, Rational(na, nc)};
    return {QuadIrr(na, nb, nc, D_), std::nullopt};
}

std::string QuadIrr::to_string() const {
    std::ostringstream os;
    os << "(" << a_ << (b_ < 0 ? "-" : "+") << (b_ < 0 ? -b_ : b_) << "*sqrt(" << D_ << "))/" << c_;
    return os.str();
}

BigInt round_circle_irrational(const QuadIrr& v, unsigned r) {
    BigInt n = pow2(r);
    if (n == 1) return 0;
    QuadIrr y = v.mod1();
    // f = floor(y * 2^r); round up exactly when frac > 1/2 (ties impossible).
    QuadIrr t = y.mul_rational(Rational(n));
    BigInt f = t.floor();
    BigInt m = t.compare_to_rational(Rational(2 * f + 1, 2)) > 0 ? f + 1 : f;
    if (m == n) m = 0;
    return m;
}

}  // namespace telic
