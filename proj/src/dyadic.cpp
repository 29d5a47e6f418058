#include "telic/dyadic.hpp"

#include <boost/multiprecision/integer.hpp>

#include <sstream>

namespace telic {

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

BigInt floor_mod(const BigInt& a, const BigInt& b) {
    return a - floor_div(a, b) * b;
}

unsigned ceil_log2(const BigInt& x) {
    if (x <= 0) throw internal_error("ceil_log2: nonpositive argument");
    if (x == 1) return 0;
    unsigned bits = boost::multiprecision::msb(x);  // floor(log2 x)
    BigInt p = BigInt(1) << bits;
    return p == x ? bits : bits + 1;
}

BigInt pow2(unsigned k) { return BigInt(1) << k; }

void Dyadic::canonicalize() {
    if (num_.is_zero()) {
        exp_ = 0;
        return;
    }
    if (exp_ == 0) return;
    unsigned tz = boost::multiprecision::lsb(boost::multiprecision::abs(num_));
    unsigned k = tz < exp_ ? tz : exp_;
    if (k > 0) {
        num_ >>= k;
        exp_ -= k;
    }
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp_, b.exp_);
    BigInt m = (a.num_ << (e - a.exp_)) + (b.num_ << (e - b.exp_));
    return Dyadic(std::move(m), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp_, b.exp_);
    BigInt m = (a.num_ << (e - a.exp_)) - (b.num_ << (e - b.exp_));
    return Dyadic(std::move(m), e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
}

Dyadic Dyadic::mul_pow2(long k) const {
    if (num_.is_zero()) return Dyadic();
    if (k >= 0) {
        long down = std::min<long>(k, exp_);
        Dyadic r;
        r.num_ = num_ << (k - down);
        r.exp_ = exp_ - static_cast<unsigned>(down);
        return r;
    }
    return Dyadic(num_, exp_ + static_cast<unsigned>(-k));
}

std::strong_ordering Dyadic::compare(const Dyadic& a, const Dyadic& b) {
    unsigned e = std::max(a.exp_, b.exp_);
    BigInt la = a.num_ << (e - a.exp_);
    BigInt lb = b.num_ << (e - b.exp_);
    if (la < lb) return std::strong_ordering::less;
    if (la > lb) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Dyadic::to_rational() const { return Rational(num_, pow2(exp_)); }

BigInt Dyadic::floor() const { return floor_div(num_, pow2(exp_)); }

std::optional<Dyadic> Dyadic::from_rational_exact(const Rational& r) {
    BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return Dyadic(boost::multiprecision::numerator(r), 0);
    unsigned tz = boost::multiprecision::lsb(den);
    if ((den >> tz) != 1) return std::nullopt;
    return Dyadic(boost::multiprecision::numerator(r), tz);
}

std::string Dyadic::to_string() const {
    std::ostringstream os;
    os << num_ << "/2^" << exp_;
    return os.str();
}

Dyadic Dyadic::from_string(const std::string& s) {
    auto pos = s.find('/');
    try {
        if (pos == std::string::npos) return Dyadic(BigInt(s), 0);
        std::string den = s.substr(pos + 1);
        if (den.rfind("2^", 0) != 0) throw data_error("dyadic denominator must be 2^q: " + s);
        BigInt m(s.substr(0, pos));
        unsigned long q = std::stoul(den.substr(2));
        return Dyadic(std::move(m), static_cast<unsigned>(q));
    } catch (const data_error&) {
        throw;
    } catch (const std::exception&) {
        throw data_error("cannot parse dyadic: " + s);
    }
}

Rational parse_rational(const std::string& s) {
    if (s.find("2^") != std::string::npos) {
        Dyadic d = Dyadic::from_string(s);
        return d.to_rational();
    }
    auto pos = s.find('/');
    try {
        if (pos == std::string::npos) return Rational(BigInt(s));
        BigInt p(s.substr(0, pos));
        BigInt q(s.substr(pos + 1));
        if (q <= 0) throw data_error("rational denominator must be positive: " + s);
        return Rational(p, q);
    } catch (const data_error&) {
        throw;
    } catch (const std::exception&) {
        throw data_error("cannot parse rational: " + s);
    }
}

std::string rational_to_string(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

BigInt round_half_down(const BigInt& p, const BigInt& q) {
    if (q <= 0) throw internal_error("round_half_down: nonpositive denominator");
    BigInt f = floor_div(p, q);
    BigInt rem = p - f * q;           // 0 <= rem < q
    BigInt twice = rem * 2;
    if (twice > q) return f + 1;      // closer to the upper neighbor
    return f;                         // closer to lower, or exact tie -> lower
}

}  // namespace telic
