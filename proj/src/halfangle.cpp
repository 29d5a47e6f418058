#include "telic/halfangle.hpp"

#include <map>

#include "telic/errors.hpp"

namespace telic {

namespace {

Dyadic round_rational(const Rational& x, unsigned prec) {
    BigInt m = round_half_down(numerator(x) * pow2(prec), denominator(x));
    return Dyadic(m, prec);
}

// arctan(1/m) partial sum with |tail| <= bound (alternating, decreasing terms).
Rational arctan_inv(unsigned m, const Rational& bound) {
    Rational sum = 0;
    Rational term(1, m);
    Rational m2 = Rational(1, BigInt(m) * m);
    unsigned j = 0;
    while (true) {
        if (j % 2 == 0)
            sum += term / (2 * j + 1);
        else
            sum -= term / (2 * j + 1);
        term *= m2;
        ++j;
        if (term / (2 * j + 1) <= bound) break;
        if (j > 100000) throw internal_error("arctan series failed to converge");
    }
    return sum;
}

}  // namespace

Dyadic pi_dyadic(unsigned p) {
    static std::map<unsigned, Dyadic> cache;
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    Rational bound = Rational(1, pow2(p + 8));
    Rational approx = 16 * arctan_inv(5, bound) - 4 * arctan_inv(239, bound);
    // series tails contribute < 20 * 2^-(p+8); rounding adds 2^-(p+4)
    Dyadic result = round_rational(approx, p + 3);
    cache.emplace(p, result);
    return result;
}

Dyadic cos_certified(const Dyadic& t, unsigned p) {
    if (t.sign() < 0 || t > Dyadic(4)) throw internal_error("cos_certified: argument out of [0,4]");
    Dyadic t0 = t;
    unsigned j = 0;
    Dyadic half(1, 1);
    while (t0 > half) {
        t0 = t0.mul_pow2(-1);
        ++j;
        if (j > 4) throw internal_error("cos_certified: halving failed");
    }
    Rational r0 = t0.to_rational();
    Rational r2 = r0 * r0;
    Rational tail(1, pow2(p + 2 * j + 6));
    Rational sum = 0;
    Rational term = 1;
    unsigned i = 0;
    while (true) {
        if (i % 2 == 0)
            sum += term;
        else
            sum -= term;
        term = term * r2 / ((2 * i + 1) * (2 * i + 2));
        ++i;
        if (term <= tail) break;
        if (i > 100000) throw internal_error("cos series failed to converge");
    }
    // undo the halvings: cos(2u) = 2 cos^2(u) - 1, error grows by at most 4x per stage
    for (unsigned s = 0; s < j; ++s) {
        if (sum > 1) sum = 1;
        if (sum < -1) sum = -1;
        sum = 2 * sum * sum - 1;
    }
    return round_rational(sum, p + 3);
}

Dyadic half_angle_eval(const Dyadic& x, unsigned w) {
    if (x.sign() < 0 || x > Dyadic(1)) throw data_error("half_angle_eval: argument out of [0,1]");
    Dyadic u = pi_dyadic(w + 8) * x;
    if (u.sign() < 0) u = Dyadic(0);
    Dyadic c = cos_certified(u, w + 4);
    Dyadic v = (Dyadic(1) - c).mul_pow2(-1);
    if (v.sign() < 0) v = Dyadic(0);
    if (v > Dyadic(1)) v = Dyadic(1);
    return round_rational(v.to_rational(), w + 4);
}

Dyadic half_angle_inverse(const Dyadic& v, unsigned w) {
    if (v.sign() < 0 || v > Dyadic(1)) throw data_error("half_angle_inverse: argument out of [0,1]");
    if (v.is_zero()) return Dyadic(0);
    if (v == Dyadic(1)) return Dyadic(1);
    Dyadic lo(0), hi(1);
    for (unsigned i = 0; i < w + 4; ++i) {
        Dyadic mid = (lo + hi).mul_pow2(-1);
        if (half_angle_eval(mid, w + 6) > v)
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

}  // namespace telic
