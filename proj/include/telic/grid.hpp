#pragma once

#include <string>
#include <vector>

#include "telic/dyadic.hpp"

namespace telic {

// A product of one-dimensional factors: closed intervals [lo, hi] with dyadic
// endpoints, or the circle R/Z with values represented in [0, 1).
struct SpaceAxis {
    enum class Kind { Interval, Circle };
    Kind kind = Kind::Interval;
    Dyadic lo;  // interval only
    Dyadic hi;

    static SpaceAxis interval(Dyadic lo, Dyadic hi);
    static SpaceAxis circle() { return SpaceAxis{Kind::Circle, Dyadic(0), Dyadic(1)}; }
};

struct SpaceSpec {
    std::vector<SpaceAxis> axes;

    std::size_t dim() const { return axes.size(); }
    static SpaceSpec unit_interval() { return SpaceSpec{{SpaceAxis::interval(0, 1)}}; }
    static SpaceSpec unit_circle() { return SpaceSpec{{SpaceAxis::circle()}}; }
    static SpaceSpec circle_power(std::size_t d);
    static SpaceSpec interval(Dyadic lo, Dyadic hi) { return SpaceSpec{{SpaceAxis::interval(lo, hi)}}; }

    bool contains(const std::vector<Rational>& x) const;
};

// Integer grid coordinates at precision r: coordinate i has value m_i / 2^r.
// On circle axes 0 <= m_i < 2^r (with the single point 0 when r = 0).
struct GridPoint {
    std::vector<BigInt> coords;
    unsigned r = 0;

    GridPoint() = default;
    GridPoint(std::vector<BigInt> c, unsigned prec) : coords(std::move(c)), r(prec) {}

    std::size_t dim() const { return coords.size(); }
    Dyadic value(std::size_t i) const { return Dyadic(coords[i], r); }
    std::vector<Rational> values() const;

    bool operator==(const GridPoint& o) const = default;

    // Textual form "(m_1,...,m_d)@r".
    std::string to_string() const;
    static GridPoint from_string(const std::string& s);
};

// Index bounds of the precision-r grid on one axis: [lo_index, hi_index] for
// intervals, [0, 2^r - 1] for circles.
BigInt axis_index_lo(const SpaceAxis& a, unsigned r);
BigInt axis_index_hi(const SpaceAxis& a, unsigned r);

// Nearest grid index to exact value x on one axis. Intervals: ties take the
// lower value, result clamped into the axis index range (x must lie in the
// axis). Circles: x is reduced mod 1; a value equidistant to two grid values
// takes the smaller representative in [0,1), so a tie against 1 === 0 picks 0.
BigInt round_axis(const SpaceAxis& a, const Rational& x, unsigned r);

// The rounding operator D_r: per-axis nearest grid point, which on these
// rectangular grids coincides with the global 2-norm nearest point.
GridPoint round_to_grid(const std::vector<Rational>& x, const SpaceSpec& space, unsigned r);
GridPoint round_to_grid(const DyadicPoint& x, const SpaceSpec& space, unsigned r);

bool grid_point_valid(const GridPoint& g, const SpaceSpec& space);

// Grid points differing by one step in exactly one coordinate, respecting
// interval bounds and circle wrap-around.
std::vector<GridPoint> grid_neighbors(const GridPoint& g, const SpaceSpec& space);

// Exact distance helpers. Circle axes use the wrap metric min(d, 1-d).
Rational axis_distance(const SpaceAxis& a, const Rational& x, const Rational& y);
Rational dist2(const SpaceSpec& space, const std::vector<Rational>& x, const std::vector<Rational>& y);

// Distance expressed as sqrt of an exact rational (distances on these grids
// have rational squares). Comparisons are exact.
struct SqrtRational {
    Rational inner;  // the distance is sqrt(inner), inner >= 0

    static SqrtRational from_dist2(Rational d2) { return SqrtRational{std::move(d2)}; }
    bool is_zero() const { return inner == 0; }
    std::strong_ordering compare(const SqrtRational& o) const;
    std::strong_ordering compare_to_rational(const Rational& t) const;
    std::string to_string() const;
};

}  // namespace telic
