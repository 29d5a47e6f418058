#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "telic/grid.hpp"

using namespace telic;

namespace {

// every grid point of the space at precision r (interval axes inclusive)
std::vector<GridPoint> all_grid_points(const SpaceSpec& space, unsigned r) {
    std::vector<std::vector<BigInt>> axes;
    for (const auto& a : space.axes) {
        std::vector<BigInt> idx;
        BigInt lo = axis_index_lo(a, r), hi = axis_index_hi(a, r);
        for (BigInt m = lo; m <= hi; ++m) idx.push_back(m);
        axes.push_back(idx);
    }
    std::vector<GridPoint> out;
    std::vector<std::size_t> cursor(space.dim(), 0);
    while (true) {
        std::vector<BigInt> c(space.dim());
        for (std::size_t i = 0; i < space.dim(); ++i) c[i] = axes[i][cursor[i]];
        out.push_back(GridPoint(c, r));
        std::size_t i = space.dim();
        while (i-- > 0) {
            if (++cursor[i] < axes[i].size()) break;
            cursor[i] = 0;
            if (i == 0) return out;
        }
    }
}

}  // namespace

TEST_CASE("round_to_grid picks the nearest grid value, ties to the lower") {
    SpaceSpec unit = SpaceSpec::unit_interval();
    CHECK(round_to_grid({Rational(5, 16)}, unit, 2) == GridPoint({BigInt(1)}, 2));  // 1/4
    CHECK(round_to_grid({Rational(3, 8)}, unit, 2) == GridPoint({BigInt(1)}, 2));   // tie -> 1/4
    // circle pair: 7/8 ties between 3/4... no: between 1/2 and 1 at r=1; wrap makes it 0
    SpaceSpec c2 = SpaceSpec::circle_power(2);
    GridPoint g = round_to_grid({Rational(3, 8), Rational(7, 8)}, c2, 1);
    CHECK(g == GridPoint({BigInt(1), BigInt(0)}, 1));
}

TEST_CASE("round_to_grid rejects values outside an interval axis") {
    SpaceSpec unit = SpaceSpec::unit_interval();
    CHECK_THROWS_AS(round_to_grid({Rational(9, 8)}, unit, 3), data_error);
}

TEST_CASE("rounding a grid point at its own precision is the identity") {
    for (const SpaceSpec& space :
         {SpaceSpec::unit_interval(), SpaceSpec::unit_circle(),
          SpaceSpec::interval(Dyadic(-2), Dyadic(2))}) {
        for (unsigned r = 0; r <= 5; ++r) {
            for (const GridPoint& g : all_grid_points(space, r)) {
                CHECK(round_to_grid(g.values(), space, r) == g);
            }
        }
    }
}

TEST_CASE("no grid point is strictly closer than the rounded one") {
    // exhaustive oracle over all grid points, r <= 6, d <= 2
    std::mt19937_64 rng(777);
    for (const SpaceSpec& space : {SpaceSpec::unit_interval(), SpaceSpec::unit_circle(),
                                   SpaceSpec::circle_power(2)}) {
        for (unsigned r = 1; r <= 6; r += 2) {
            auto grid = all_grid_points(space, r);
            for (int trial = 0; trial < 40; ++trial) {
                std::vector<Rational> x;
                for (std::size_t i = 0; i < space.dim(); ++i)
                    x.push_back(Rational(long(rng() % 2048), 2048));
                GridPoint got = round_to_grid(x, space, r);
                Rational best = dist2(space, got.values(), x);
                for (const GridPoint& g : grid) {
                    CHECK(dist2(space, g.values(), x) >= best);
                }
            }
        }
    }
}

TEST_CASE("refining the precision never moves the rounding farther away") {
    std::mt19937_64 rng(101);
    SpaceSpec unit = SpaceSpec::unit_interval();
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rational> x{Rational(long(rng() % 4096), 4096)};
        Rational prev;
        bool first = true;
        for (unsigned r = 1; r <= 8; ++r) {
            Rational d = dist2(unit, round_to_grid(x, unit, r).values(), x);
            if (!first) CHECK(d <= prev);
            prev = d;
            first = false;
        }
    }
}

TEST_CASE("grid_neighbors respects bounds and wrap-around") {
    SpaceSpec unit = SpaceSpec::unit_interval();
    auto at = [](std::vector<long> c, unsigned r) {
        std::vector<BigInt> v(c.begin(), c.end());
        return GridPoint(v, r);
    };
    auto sort_pts = [](std::vector<GridPoint> v) {
        std::sort(v.begin(), v.end(), [](const GridPoint& a, const GridPoint& b) {
            return a.coords < b.coords;
        });
        return v;
    };
    CHECK(sort_pts(grid_neighbors(at({0}, 2), unit)) == std::vector<GridPoint>{at({1}, 2)});

    SpaceSpec circ = SpaceSpec::unit_circle();
    CHECK(sort_pts(grid_neighbors(at({2}, 2), circ)) ==
          std::vector<GridPoint>{at({1}, 2), at({3}, 2)});
    CHECK(sort_pts(grid_neighbors(at({0}, 2), circ)) ==
          std::vector<GridPoint>{at({1}, 2), at({3}, 2)});

    // d = 2: one coordinate moves at a time
    SpaceSpec c2 = SpaceSpec::circle_power(2);
    auto nb = grid_neighbors(at({0, 0}, 2), c2);
    CHECK(nb.size() == 4);
    for (const auto& g : nb) {
        int moved = 0;
        for (std::size_t i = 0; i < 2; ++i)
            if (g.coords[i] != 0) ++moved;
        CHECK(moved == 1);
    }
}

TEST_CASE("grid point round trip through values and text") {
    GridPoint g({BigInt(-3), BigInt(7)}, 4);
    CHECK(g.to_string() == "(-3,7)@4");
    CHECK(GridPoint::from_string(g.to_string()) == g);
    SpaceSpec sp{{SpaceAxis::interval(Dyadic(-1), Dyadic(1)), SpaceAxis::interval(0, 1)}};
    CHECK(round_to_grid(g.values(), sp, 4) == g);
}

TEST_CASE("axis_distance uses the wrap metric on circles") {
    SpaceAxis c = SpaceAxis::circle();
    CHECK(axis_distance(c, Rational(1, 16), Rational(15, 16)) == Rational(1, 8));
    CHECK(axis_distance(c, Rational(1, 4), Rational(3, 4)) == Rational(1, 2));
    SpaceAxis iv = SpaceAxis::interval(0, 1);
    CHECK(axis_distance(iv, Rational(1, 16), Rational(15, 16)) == Rational(7, 8));
}

TEST_CASE("sqrt-rational distances compare exactly") {
    SqrtRational half = SqrtRational::from_dist2(Rational(1, 2));
    CHECK(half.compare_to_rational(Rational(7, 10)) == std::strong_ordering::greater);
    CHECK(half.compare_to_rational(Rational(5, 7)) == std::strong_ordering::less);
    CHECK(SqrtRational::from_dist2(Rational(1, 4)).compare_to_rational(Rational(1, 2)) ==
          std::strong_ordering::equal);
    CHECK(half.compare(SqrtRational::from_dist2(Rational(49, 100))) ==
          std::strong_ordering::greater);
}
