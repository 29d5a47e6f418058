#pragma once

#include <optional>
#include <string>

#include "telic/instance.hpp"

namespace telic {

struct PullbackTrace {
    bool applicable = false;
    // grid-value hull(s) of the pulled-back orbit-start interval at precision r_n
    std::vector<std::array<Rational, 2>> pulled;
    bool margin_sensitive = false;  // an arc endpoint fell exactly on a rounding boundary
    bool kary_mismatch = false;     // greedy k-ary search disagreed with the exact ranges
};

struct Decision {
    bool yes = false;
    std::optional<GridPoint> witness;  // lexicographically least precision-n seed
    std::string solver;
    OpCounters counters;
    PullbackTrace trace;
};

// true iff seed_eval(s) is defined and the n-step discretized orbit of its
// image lands in the discretized target at precision v(n)
bool verify_certificate(const TelicInstance& inst, unsigned n, const GridPoint& s,
                        const ResourceLimits& limits = {}, OpCounters* counters = nullptr);

// scans all (2^n + 1)^d seeds in lexicographic order; YES with the first
// verifying seed. Caps the seed space at d*n <= 24.
Decision brute_force_decide(const TelicInstance& inst, unsigned n, const ResourceLimits& limits = {});

// k-ary descent: subdivide [0,1]^d, evaluate the family map at subcube
// centers, recurse into the subcube whose center image is closest to the
// target (ties to the lexicographically smallest), then test the final cell
// and its one-cell neighborhood in lex order against D_r(A). Distance is
// taken on the lift: circle target arcs are translated only across the
// family's image range, so images near 0 are not treated as wrap-close to a
// target near 1 unless some seed image actually crosses the wrap. If the
// descent still misses, closed-form kinds run an exact completeness pass:
// membership per axis is a contiguous run of the monotone rounded-image
// index, found by binary search; the candidate is re-verified before return.
std::optional<GridPoint> kary_search(const SeedFamily& seeds, unsigned n, const RectUnion& A, unsigned r,
                                     OpCounters* counters = nullptr);

// image value rounded onto the family's grid (the family map is X_{r_n}-valued);
// nullopt when the image exits an interval axis (exits are bottom, as in seed_eval)
std::optional<Rational> family_grid_value(const SpaceAxis& axis, const Rational& raw, unsigned rn);

// linear-scan oracle for kary_search: first member seed in lex order
std::optional<GridPoint> scan_search(const SeedFamily& seeds, unsigned n, const RectUnion& A, unsigned r,
                                     OpCounters* counters = nullptr);

// inverse-pullback decider for invertible systems (rotations, d = 1, monotone
// closed-form seeds): pulls the target back through the chain, wrapper, and n
// inverse steps with exact arc arithmetic, then searches the seed family.
// Throws not_applicable_error when preconditions fail.
Decision pullback_decide(const TelicInstance& inst, unsigned n, const ResourceLimits& limits = {});

// solver = "brute" | "pullback" | "auto" (pullback with brute fallback)
Decision decide(const TelicInstance& inst, unsigned n, const std::string& solver,
                const ResourceLimits& limits = {});

}  // namespace telic
