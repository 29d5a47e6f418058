#include "telic/entropy.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>

#include "telic/errors.hpp"

namespace telic {

namespace {

struct DeadlineGuard {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::uint64_t budget_ms;
    unsigned spin = 0;
    explicit DeadlineGuard(std::uint64_t ms) : budget_ms(ms) {}
    void tick() {
        if (budget_ms == 0 || (++spin & 0xfffu)) return;
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        if (static_cast<std::uint64_t>(elapsed) > budget_ms)
            throw resource_limit_error("separated-set scan exceeded the wall-clock budget");
    }
};

// exact point distance on one axis, wrap-aware on circles
Rational axis_metric(const SpaceAxis& axis, const Rational& a, const Rational& b) {
    Rational d = a < b ? b - a : a - b;
    if (axis.kind == SpaceAxis::Kind::Circle) {
        d = frac1(d);
        if (2 * d > 1) d = 1 - d;
    }
    return d;
}

// exact rho_n; irrational rotations are isometries so no orbit is needed
Rational rho_exact(const SystemSpec& spec, const SpaceAxis& axis, const Rational& x,
                   const Rational& y, unsigned n) {
    const bool circle = axis.kind == SpaceAxis::Kind::Circle;
    Rational a = circle ? frac1(x) : x;
    Rational b = circle ? frac1(y) : y;
    Rational best = axis_metric(axis, a, b);
    if (spec.kind == SystemKind::Rotation) return best;
    for (unsigned j = 1; j < n; ++j) {
        a = step_exact(spec, a);
        b = step_exact(spec, b);
        Rational d = axis_metric(axis, a, b);
        if (d > best) best = d;
    }
    return best;
}

Dyadic round_to_bits(const Rational& x, unsigned w) {
    if (auto d = Dyadic::from_rational_exact(x); d && d->exponent() <= w) return *d;
    Rational t = x * pow2(w);
    return Dyadic(round_half_down(numerator(t), denominator(t)), w);
}

// admits offsets in lexicographic order; a candidate joins iff it is
// separated from every member, scanning the most recent members first (the
// likeliest rejecters sit nearby)
template <typename Sep>
std::vector<std::uint64_t> greedy_admit(std::uint64_t total, Sep&& separated, DeadlineGuard& guard) {
    std::vector<std::uint64_t> admitted;
    for (std::uint64_t i = 0; i < total; ++i) {
        guard.tick();
        bool ok = true;
        for (auto it = admitted.rbegin(); it != admitted.rend(); ++it) {
            if (!separated(i, *it)) {
                ok = false;
                break;
            }
        }
        if (ok) admitted.push_back(i);
    }
    return admitted;
}

// smallest integer threshold with d/2^r >= eps  <=>  d >= thr for integer d
std::int64_t int_threshold(const Dyadic& eps, unsigned r) {
    Rational t = eps.to_rational() * pow2(r);
    BigInt thr = -floor_div(-numerator(t), denominator(t));
    if (thr > (BigInt(1) << 62)) thr = BigInt(1) << 62;
    return thr.convert_to<std::int64_t>();
}

}  // namespace

Dyadic bowen_distance(const SystemSpec& spec, const Rational& x, const Rational& y, unsigned n,
                      unsigned w) {
    if (spec.space.dim() != 1) throw data_error("bowen_distance: one-dimensional systems only");
    if (n < 1) throw data_error("bowen_distance: n must be at least 1");
    return round_to_bits(rho_exact(spec, spec.space.axes[0], x, y, n), w);
}

std::vector<GridPoint> greedy_separated_set(const SystemSpec& spec, unsigned n, const Dyadic& eps,
                                            unsigned r, const ResourceLimits& limits) {
    if (spec.space.dim() != 1) throw data_error("greedy_separated_set: one-dimensional systems only");
    if (n < 1) throw data_error("greedy_separated_set: n must be at least 1");
    if (eps.sign() <= 0) throw data_error("greedy_separated_set: eps must be positive");
    if (r > limits.max_precision)
        throw resource_limit_error("sample precision exceeds the configured cap");

    const SpaceAxis& axis = spec.space.axes[0];
    const BigInt ilo = axis_index_lo(axis, r), ihi = axis_index_hi(axis, r);
    const BigInt width = ihi - ilo + 1;
    if (width > (BigInt(1) << 22)) throw resource_limit_error("grid too large to enumerate");
    const auto total = width.convert_to<std::uint64_t>();
    const auto base = ilo.convert_to<std::int64_t>();
    DeadlineGuard guard(limits.timeout_ms);

    std::vector<std::uint64_t> admitted;
    const bool on_grid_orbit = spec.kind == SystemKind::Doubling || spec.kind == SystemKind::Tent;
    if (on_grid_orbit && r + n <= 60) {
        // doubling and tent keep dyadic orbits on the 2^-r grid, so the whole
        // scan runs on int64 numerators
        const std::int64_t P = std::int64_t(1) << r;
        const std::int64_t thr = int_threshold(eps, r);
        const bool circle = axis.kind == SpaceAxis::Kind::Circle;
        std::vector<std::vector<std::int64_t>> orbit(n, std::vector<std::int64_t>(total));
        for (std::uint64_t i = 0; i < total; ++i) orbit[0][i] = base + std::int64_t(i);
        for (unsigned j = 1; j < n; ++j) {
            for (std::uint64_t i = 0; i < total; ++i) {
                std::int64_t m = orbit[j - 1][i];
                orbit[j][i] = spec.kind == SystemKind::Doubling ? (2 * m) & (P - 1)
                              : 2 * m <= P                     ? 2 * m
                                                               : 2 * P - 2 * m;
            }
        }
        auto separated = [&](std::uint64_t i, std::uint64_t k) {
            for (unsigned j = 0; j < n; ++j) {
                std::int64_t d = std::abs(orbit[j][i] - orbit[j][k]);
                if (circle && 2 * d > P) d = P - d;
                if (d >= thr) return true;
            }
            return false;
        };
        admitted = greedy_admit(total, separated, guard);
    } else if (spec.kind == SystemKind::Rotation || n == 1) {
        // rotations are isometries: rho_n is the plain grid distance; n = 1
        // needs no dynamics for any system
        if (r <= 60) {
            const std::int64_t P = std::int64_t(1) << r;
            const std::int64_t thr = int_threshold(eps, r);
            const bool circle = axis.kind == SpaceAxis::Kind::Circle;
            auto separated = [&](std::uint64_t i, std::uint64_t k) {
                std::int64_t d = std::int64_t(i > k ? i - k : k - i);
                if (circle && 2 * d > P) d = P - d;
                return d >= thr;
            };
            admitted = greedy_admit(total, separated, guard);
        } else {
            const Rational e = eps.to_rational();
            auto separated = [&](std::uint64_t i, std::uint64_t k) {
                Rational a(BigInt(base) + i, pow2(r)), b(BigInt(base) + k, pow2(r));
                return axis_metric(axis, a, b) >= e;
            };
            admitted = greedy_admit(total, separated, guard);
        }
    } else {
        // general systems iterate exactly; rational orbits grow fast, so this
        // path is held to small grids
        if (total > 4096)
            throw resource_limit_error("exact orbit separation needs a grid of at most 4096 points");
        const Rational e = eps.to_rational();
        std::vector<std::vector<Rational>> orbit(n, std::vector<Rational>(total));
        for (std::uint64_t i = 0; i < total; ++i) orbit[0][i] = Rational(BigInt(base) + i, pow2(r));
        for (unsigned j = 1; j < n; ++j) {
            for (std::uint64_t i = 0; i < total; ++i) {
                guard.tick();
                orbit[j][i] = step_exact(spec, orbit[j - 1][i]);
            }
        }
        auto separated = [&](std::uint64_t i, std::uint64_t k) {
            for (unsigned j = 0; j < n; ++j)
                if (axis_metric(axis, orbit[j][i], orbit[j][k]) >= e) return true;
            return false;
        };
        admitted = greedy_admit(total, separated, guard);
    }

    std::vector<GridPoint> out;
    out.reserve(admitted.size());
    for (std::uint64_t i : admitted) out.push_back(GridPoint({ilo + i}, r));
    return out;
}

std::vector<SeparatedSetReport> entropy_estimate(const SystemSpec& spec, unsigned n_lo, unsigned n_hi,
                                                 const Dyadic& eps, unsigned r,
                                                 const ResourceLimits& limits) {
    if (n_lo < 1 || n_hi < n_lo) throw data_error("entropy_estimate: need 1 <= n_lo <= n_hi");
    std::vector<SeparatedSetReport> out;
    for (unsigned n = n_lo; n <= n_hi; ++n) {
        SeparatedSetReport rep;
        rep.system_id = spec.id();
        rep.n = n;
        rep.eps = eps;
        rep.r = r;
        rep.count = greedy_separated_set(spec, n, eps, r, limits).size();
        if (!out.empty() && out.back().count > 0)
            rep.ratio = double(rep.count) / double(out.back().count);
        out.push_back(std::move(rep));
    }

    // least-squares slope of log2 count vs n over the top half of the range;
    // the head saturates the grid and would bias the growth rate
    const std::size_t len = out.size();
    const std::size_t first = len / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = double(len - first);
    for (std::size_t i = first; i < len; ++i) {
        double xv = out[i].n, yv = std::log2(double(out[i].count));
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
    }
    const double denom = k * sxx - sx * sx;
    const double slope = denom != 0 ? (k * sxy - sx * sy) / denom : 0.0;
    for (auto& rep : out) rep.slope_tail = slope;
    return out;
}

unsigned max_separated_count(const SystemSpec& spec, unsigned n, const Dyadic& eps, unsigned r) {
    if (spec.space.dim() != 1) throw data_error("max_separated_count: one-dimensional systems only");
    if (n < 1) throw data_error("max_separated_count: n must be at least 1");
    const SpaceAxis& axis = spec.space.axes[0];
    const BigInt ilo = axis_index_lo(axis, r), ihi = axis_index_hi(axis, r);
    const BigInt width = ihi - ilo + 1;
    if (width > 64)
        throw resource_limit_error("exhaustive separation search is capped at 64 grid points");
    const unsigned total = width.convert_to<unsigned>();
    const Rational e = eps.to_rational();

    // pairwise separation graph from the exact metric (no fast paths: this is
    // the oracle the greedy scan is checked against)
    std::vector<std::uint64_t> adj(total, 0);
    for (unsigned i = 0; i < total; ++i) {
        Rational a(ilo + i, pow2(r));
        for (unsigned k = i + 1; k < total; ++k) {
            Rational b(ilo + k, pow2(r));
            if (rho_exact(spec, axis, a, b, n) >= e) {
                adj[i] |= std::uint64_t(1) << k;
                adj[k] |= std::uint64_t(1) << i;
            }
        }
    }

    // branch-and-bound maximum clique over candidate masks
    unsigned best = 0;
    std::function<void(std::uint64_t, unsigned)> expand = [&](std::uint64_t cand, unsigned size) {
        if (size > best) best = size;
        while (cand) {
            if (size + unsigned(std::popcount(cand)) <= best) return;
            unsigned v = unsigned(std::countr_zero(cand));
            cand &= cand - 1;
            expand(cand & adj[v], size + 1);
        }
    };
    std::uint64_t all = total == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << total) - 1;
    expand(all, 0);
    return best;
}

}  // namespace telic
