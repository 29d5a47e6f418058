#include "telic/grid.hpp"

#include <boost/multiprecision/integer.hpp>

#include <sstream>

namespace telic {

namespace {

BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

Rational frac_part(const Rational& x) {
    BigInt f = floor_div(num(x), den(x));
    return x - Rational(f);
}

}  // namespace

SpaceAxis SpaceAxis::interval(Dyadic lo, Dyadic hi) {
    if (lo >= hi) throw data_error("interval axis needs lo < hi");
    return SpaceAxis{Kind::Interval, std::move(lo), std::move(hi)};
}

SpaceSpec SpaceSpec::circle_power(std::size_t d) {
    SpaceSpec s;
    for (std::size_t i = 0; i < d; ++i) s.axes.push_back(SpaceAxis::circle());
    return s;
}

bool SpaceSpec::contains(const std::vector<Rational>& x) const {
    if (x.size() != axes.size()) return false;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (axes[i].kind == SpaceAxis::Kind::Interval) {
            if (x[i] < axes[i].lo.to_rational() || x[i] > axes[i].hi.to_rational()) return false;
        }
    }
    return true;
}

std::vector<Rational> GridPoint::values() const {
    std::vector<Rational> v;
    v.reserve(coords.size());
    for (const auto& m : coords) v.push_back(Rational(m, pow2(r)));
    return v;
}

std::string GridPoint::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ",";
        os << coords[i];
    }
    os << ")@" << r;
    return os.str();
}

GridPoint GridPoint::from_string(const std::string& s) {
    auto at = s.rfind('@');
    if (at == std::string::npos || s.empty() || s.front() != '(')
        throw data_error("grid point must look like (m_1,...,m_d)@r: " + s);
    auto close = s.rfind(')', at);
    if (close == std::string::npos) throw data_error("grid point missing ')': " + s);
    GridPoint g;
    try {
        g.r = static_cast<unsigned>(std::stoul(s.substr(at + 1)));
        std::string body = s.substr(1, close - 1);
        std::size_t pos = 0;
        while (pos <= body.size()) {
            auto comma = body.find(',', pos);
            std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            g.coords.emplace_back(tok);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    } catch (const std::exception&) {
        throw data_error("cannot parse grid point: " + s);
    }
    if (g.coords.empty()) throw data_error("grid point has no coordinates: " + s);
    return g;
}

BigInt axis_index_lo(const SpaceAxis& a, unsigned r) {
    if (a.kind == SpaceAxis::Kind::Circle) return 0;
    // ceil(lo * 2^r)
    Rational t = a.lo.to_rational() * pow2(r);
    return -floor_div(-num(t), den(t));
}

BigInt axis_index_hi(const SpaceAxis& a, unsigned r) {
    if (a.kind == SpaceAxis::Kind::Circle) {
        BigInt n = pow2(r);
        return n - 1;
    }
    Rational t = a.hi.to_rational() * pow2(r);
    return floor_div(num(t), den(t));
}

BigInt round_axis(const SpaceAxis& a, const Rational& x, unsigned r) {
    if (a.kind == SpaceAxis::Kind::Interval) {
        if (x < a.lo.to_rational() || x > a.hi.to_rational())
            throw data_error("value outside interval axis");
        Rational t = x * pow2(r);
        BigInt m = round_half_down(num(t), den(t));
        BigInt lo = axis_index_lo(a, r), hi = axis_index_hi(a, r);
        if (hi < lo) throw data_error("axis has no grid points at this precision");
        if (m < lo) m = lo;
        if (m > hi) m = hi;
        return m;
    }
    // Circle: reduce into [0,1), then round with the wrap-aware tie rule.
    Rational y = frac_part(x);
    BigInt n = pow2(r);
    if (n == 1) return 0;
    Rational t = y * n;
    BigInt f = floor_div(num(t), den(t));
    Rational rem = t - Rational(f);
    BigInt m;
    if (rem * 2 < 1) {
        m = f;
    } else if (rem * 2 > 1) {
        m = f + 1;
    } else {
        // Tie between f and f+1: smaller value in [0,1) after wrap, so the
        // candidate that wraps to 0 wins; otherwise take the lower one.
        m = (f + 1 == n) ? BigInt(0) : f;
    }
    if (m == n) m = 0;
    return m;
}

GridPoint round_to_grid(const std::vector<Rational>& x, const SpaceSpec& space, unsigned r) {
    if (x.size() != space.dim()) throw data_error("point/space dimension mismatch");
    GridPoint g;
    g.r = r;
    g.coords.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g.coords.push_back(round_axis(space.axes[i], x[i], r));
    return g;
}

GridPoint round_to_grid(const DyadicPoint& x, const SpaceSpec& space, unsigned r) {
    std::vector<Rational> v;
    v.reserve(x.coords.size());
    for (const auto& c : x.coords) v.push_back(c.to_rational());
    return round_to_grid(v, space, r);
}

bool grid_point_valid(const GridPoint& g, const SpaceSpec& space) {
    if (g.dim() != space.dim()) return false;
    for (std::size_t i = 0; i < g.dim(); ++i) {
        if (g.coords[i] < axis_index_lo(space.axes[i], g.r)) return false;
        if (g.coords[i] > axis_index_hi(space.axes[i], g.r)) return false;
    }
    return true;
}

std::vector<GridPoint> grid_neighbors(const GridPoint& g, const SpaceSpec& space) {
    if (!grid_point_valid(g, space)) throw data_error("grid point outside space");
    std::vector<GridPoint> out;
    for (std::size_t i = 0; i < g.dim(); ++i) {
        const SpaceAxis& a = space.axes[i];
        BigInt lo = axis_index_lo(a, g.r), hi = axis_index_hi(a, g.r);
        for (int step : {-1, +1}) {
            GridPoint h = g;
            BigInt m = g.coords[i] + step;
            if (a.kind == SpaceAxis::Kind::Circle) {
                BigInt n = pow2(g.r);
                m = floor_mod(m, n);
                if (m == g.coords[i]) continue;  // r = 0: single point
            } else {
                if (m < lo || m > hi) continue;
            }
            h.coords[i] = m;
            bool dup = false;
            for (const auto& p : out) dup = dup || p == h;
            if (!dup) out.push_back(std::move(h));
        }
    }
    return out;
}

Rational axis_distance(const SpaceAxis& a, const Rational& x, const Rational& y) {
    if (a.kind == SpaceAxis::Kind::Interval) {
        Rational d = x - y;
        return d < 0 ? Rational(-d) : d;
    }
    Rational d = frac_part(x - y);  // in [0,1)
    Rational w = 1 - d;
    return d < w ? d : w;
}

Rational dist2(const SpaceSpec& space, const std::vector<Rational>& x, const std::vector<Rational>& y) {
    if (x.size() != space.dim() || y.size() != space.dim())
        throw data_error("dist2: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < space.dim(); ++i) {
        Rational d = axis_distance(space.axes[i], x[i], y[i]);
        s += d * d;
    }
    return s;
}

std::strong_ordering SqrtRational::compare(const SqrtRational& o) const {
    if (inner < o.inner) return std::strong_ordering::less;
    if (inner > o.inner) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::strong_ordering SqrtRational::compare_to_rational(const Rational& t) const {
    if (t < 0) return std::strong_ordering::greater;  // inner >= 0
    Rational t2 = t * t;
    if (inner < t2) return std::strong_ordering::less;
    if (inner > t2) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string SqrtRational::to_string() const {
    // Print exactly when the square root is rational.
    BigInt n = boost::multiprecision::numerator(inner);
    BigInt d = boost::multiprecision::denominator(inner);
    BigInt sn = boost::multiprecision::sqrt(n);
    BigInt sd = boost::multiprecision::sqrt(d);
    if (sn * sn == n && sd * sd == d) return rational_to_string(Rational(sn, sd));
    return "sqrt(" + rational_to_string(inner) + ")";
}

}  // namespace telic
