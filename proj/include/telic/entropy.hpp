#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "telic/discretize.hpp"
#include "telic/systems.hpp"

namespace telic {

// Orbit metric rho_n(x, y) = max over 0 <= j < n of ||T^j x - T^j y||, with
// the wrap metric on circle axes. Orbits are iterated exactly (rationally)
// everywhere except irrational rotations, which are isometries, so rho_n
// collapses to the plain point distance. The exact value is rounded to w
// fractional bits; dyadic distances of precision <= w come back unchanged.
Dyadic bowen_distance(const SystemSpec& spec, const Rational& x, const Rational& y, unsigned n,
                      unsigned w);

struct SeparatedSetReport {
    std::string system_id;
    unsigned n = 0;
    Dyadic eps;
    unsigned r = 0;
    std::uint64_t count = 0;
    double ratio = 0.0;       // count(n) / count at the previous n; 0 on the first row
    double slope_tail = 0.0;  // least-squares slope of log2 count over the top half of the range
};

// Scans the grid X_r in lexicographic order and admits a point iff its rho_n
// distance to every admitted point is >= eps. The result is an
// inclusion-maximal (n, eps)-separated subset of the sampled grid.
std::vector<GridPoint> greedy_separated_set(const SystemSpec& spec, unsigned n, const Dyadic& eps,
                                            unsigned r, const ResourceLimits& limits = {});

// Runs the greedy construction across n_lo..n_hi and derives growth ratios
// and the tail slope of log2 count, the finite-n probe of the entropy limit.
std::vector<SeparatedSetReport> entropy_estimate(const SystemSpec& spec, unsigned n_lo,
                                                 unsigned n_hi, const Dyadic& eps, unsigned r,
                                                 const ResourceLimits& limits = {});

// Exhaustive maximum (n, eps)-separated cardinality by branch and bound over
// the pairwise distance graph; the independent oracle for the greedy
// sandwich N(n, eps) >= |greedy| >= N(n, 2 eps). Grids over 64 points are
// out of budget.
unsigned max_separated_count(const SystemSpec& spec, unsigned n, const Dyadic& eps, unsigned r);

}  // namespace telic
