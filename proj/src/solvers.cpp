#include "telic/solvers.hpp"

#include <algorithm>
#include <chrono>

#include "telic/errors.hpp"

namespace telic {

namespace {

BigInt num(const Rational& r) { return numerator(r); }
BigInt den(const Rational& r) { return denominator(r); }

struct DeadlineGuard {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::uint64_t budget_ms;
    explicit DeadlineGuard(std::uint64_t ms) : budget_ms(ms) {}
    void check() const {
        if (budget_ms == 0) return;
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        if (static_cast<std::uint64_t>(elapsed) > budget_ms)
            throw resource_limit_error("wall-clock budget exceeded");
    }
};

}  // namespace

std::optional<Rational> family_grid_value(const SpaceAxis& axis, const Rational& raw, unsigned rn) {
    if (axis.kind == SpaceAxis::Kind::Circle) return Rational(round_axis(axis, frac1(raw), rn), pow2(rn));
    if (raw < axis.lo.to_rational() || raw > axis.hi.to_rational()) return std::nullopt;
    return Rational(round_axis(axis, raw, rn), pow2(rn));
}

namespace {

BigInt rat_floor(const Rational& x) { return floor_div(num(x), den(x)); }
BigInt rat_ceil(const Rational& x) { return -floor_div(-num(x), den(x)); }

// grid index of a lift value at precision p, without reducing mod 2^p
BigInt lift_index(const SpaceAxis& axis, const Rational& u, unsigned p) {
    if (axis.kind == SpaceAxis::Kind::Circle) {
        Rational f = frac1(u);
        Rational whole = u - f;
        return (num(whole) / den(whole)) * pow2(p) + round_circle_lift(f, p);
    }
    return round_axis(axis, u, p);
}

// double-rounded lift index of the family image on one axis: first onto the
// family grid at rn, then onto the membership grid at r. Monotone in j for
// the closed-form kinds. Interval-axis exits map to sentinels so the order is
// preserved.
BigInt member_index(const SeedFamily& seeds, unsigned n, unsigned ax, const SpaceAxis& axis,
                    const BigInt& j, unsigned rn, unsigned r, const SpaceSpec& space,
                    const BigInt& below, const BigInt& above, OpCounters* counters) {
    if (counters) ++counters->seed_evals;
    std::vector<Rational> sv(seeds.d, Rational(0));
    sv[ax] = Rational(j, pow2(n));
    auto img = seed_family_image(seeds, n, sv, space);
    Rational u = (*img)[ax];
    if (axis.kind == SpaceAxis::Kind::Interval) {
        if (u < axis.lo.to_rational()) return below;
        if (u > axis.hi.to_rational()) return above;
    }
    BigInt i1 = lift_index(axis, u, rn);
    return lift_index(axis, Rational(i1, pow2(rn)), r);
}

// Completeness pass for the closed-form per-axis-monotone kinds: membership
// along one axis is a contiguous run of the monotone index function, so the
// run edge is found by binary search. The greedy descent steers by center
// distance and can land a few cells off when a narrow target sits just past a
// subdivision boundary of a convex image map; this pass cannot miss.
std::optional<GridPoint> monotone_search(const SeedFamily& seeds, unsigned n, const RectUnion& A,
                                         unsigned r, OpCounters* counters) {
    if (seeds.kind == SeedKind::Table) return std::nullopt;
    const unsigned d = seeds.d;
    const unsigned rn = seeds.r_of(n);
    const BigInt top = pow2(n);
    for (const auto& rect : A.rects) {
        std::vector<BigInt> coord(d);
        bool rect_ok = true;
        for (unsigned ax = 0; ax < d && rect_ok; ++ax) {
            const SpaceAxis& axis = A.space.axes[ax];
            auto hull = target_axis_hull(axis, rect[ax][0], rect[ax][1], r);
            if (!hull) {
                rect_ok = false;
                break;
            }
            const bool decreasing = seeds.kind == SeedKind::Affine && seeds.a[ax] < 0;
            // in-axis index span at r; interval exits sort strictly outside it
            BigInt span_lo = 0, span_hi = pow2(r);
            if (axis.kind == SpaceAxis::Kind::Interval) {
                span_lo = round_axis(axis, axis.lo.to_rational(), r);
                span_hi = round_axis(axis, axis.hi.to_rational(), r);
            }
            const BigInt below = span_lo - 1, above = span_hi + 1;
            auto h = [&](const BigInt& j) {
                return member_index(seeds, n, ax, axis, decreasing ? top - j : j, rn, r, A.space,
                                    below, above, counters);
            };
            if (hull->full && axis.kind == SpaceAxis::Kind::Circle) {
                coord[ax] = 0;  // circle images never bottom
                continue;
            }
            BigInt win_lo = hull->lo, win_hi = hull->hi;
            if (hull->full) {
                win_lo = span_lo;
                win_hi = span_hi;
            }
            BigInt h0 = h(0), h1 = h(top);
            BigInt m_lo = 0, m_hi = 0;
            if (axis.kind == SpaceAxis::Kind::Circle && !hull->full) {
                // lift copies of the target window the image range can reach
                m_lo = floor_div(h0 - win_hi, pow2(r));
                m_hi = floor_div(h1 - win_lo, pow2(r)) + 1;
            }
            std::optional<BigInt> found;
            for (BigInt m = m_lo; m <= m_hi && !found; ++m) {
                BigInt wlo = win_lo + m * pow2(r), whi = win_hi + m * pow2(r);
                if (whi < h0 || wlo > h1) continue;
                BigInt a = 0, b = top;  // least j with h(j) >= wlo
                while (a < b) {
                    BigInt mid = (a + b) / 2;
                    if (h(mid) < wlo)
                        a = mid + 1;
                    else
                        b = mid;
                }
                BigInt ha = h(a);
                if (ha >= wlo && ha <= whi) found = a;
            }
            if (!found) {
                rect_ok = false;
                break;
            }
            coord[ax] = decreasing ? top - *found : *found;
        }
        if (!rect_ok) continue;
        std::vector<Rational> sv(d), vals(d);
        for (unsigned ax = 0; ax < d; ++ax) sv[ax] = Rational(coord[ax], pow2(n));
        auto img = seed_family_image(seeds, n, sv, A.space);
        if (!img) continue;
        bool in_space = true;
        for (unsigned ax = 0; ax < d && in_space; ++ax) {
            auto v = family_grid_value(A.space.axes[ax], (*img)[ax], rn);
            if (v) vals[ax] = *v;
            else in_space = false;
        }
        if (!in_space) continue;
        if (counters) ++counters->membership_checks;
        if (rect_union_member(A, vals, r)) return GridPoint(coord, n);
    }
    return std::nullopt;
}

// per-axis image range of the family over the whole seed cube, on the lift
// (images are raw values, not wrapped into the circle)
std::optional<std::vector<std::array<Rational, 2>>> family_image_range(const SeedFamily& seeds) {
    std::vector<std::array<Rational, 2>> range(seeds.d, {Rational(0), Rational(1)});
    switch (seeds.kind) {
        case SeedKind::Identity:
        case SeedKind::Square:
            return range;
        case SeedKind::Affine:
            for (unsigned i = 0; i < seeds.d; ++i) {
                range[i] = {seeds.b[i], seeds.a[i] + seeds.b[i]};
                if (range[i][0] > range[i][1]) std::swap(range[i][0], range[i][1]);
            }
            return range;
        case SeedKind::Table: {
            bool any = false;
            for (const auto& entry : seeds.table) {
                if (!entry) continue;
                Rational v = entry->values()[0];
                if (!any) range[0] = {v, v};
                range[0][0] = std::min(range[0][0], v);
                range[0][1] = std::max(range[0][1], v);
                any = true;
            }
            if (!any) return std::nullopt;
            return range;
        }
    }
    return std::nullopt;
}

// squared distance from a lift image value to the target union, used to steer
// the k-ary descent. Targets are widened by half a grid cell (values that
// close round into the rect count as hits), and circle axes are measured on
// the lift: a target arc copy at integer offset k counts only when the
// family's image range reaches it. Raw circle wrap distance would make seeds
// whose images sit near 0 look close to a target near 1 even though no seed
// image ever crosses the wrap, and the greedy then descends away from every
// member.
std::optional<Rational> descent_distance(const RectUnion& A, const std::vector<Rational>& img,
                                         const std::vector<std::array<Rational, 2>>& range,
                                         unsigned r) {
    const Rational half_cell(1, pow2(r + 1));
    std::optional<Rational> best;
    for (const auto& rect : A.rects) {
        Rational sum = 0;
        bool reachable = true;
        for (std::size_t ax = 0; ax < A.space.axes.size() && reachable; ++ax) {
            const SpaceAxis& axis = A.space.axes[ax];
            if (axis.kind == SpaceAxis::Kind::Circle) {
                const Rational vlo = frac1(rect[ax][0]) - half_cell;
                const Rational len = rect[ax][1] - rect[ax][0] + 2 * half_cell;
                std::optional<Rational> axd;
                for (BigInt k = rat_floor(range[ax][0] - vlo - len); k <= rat_ceil(range[ax][1] - vlo);
                     ++k) {
                    Rational alo = vlo + k, ahi = alo + len;
                    if (ahi < range[ax][0] || alo > range[ax][1]) continue;
                    Rational d = 0;
                    if (img[ax] < alo) d = alo - img[ax];
                    if (img[ax] > ahi) d = img[ax] - ahi;
                    if (!axd || d < *axd) axd = d;
                }
                if (!axd) {
                    reachable = false;
                    break;
                }
                sum += *axd * *axd;
            } else {
                Rational d = 0;
                if (img[ax] < rect[ax][0] - half_cell) d = rect[ax][0] - half_cell - img[ax];
                if (img[ax] > rect[ax][1] + half_cell) d = img[ax] - rect[ax][1] - half_cell;
                sum += d * d;
            }
        }
        if (!reachable) continue;
        if (!best || sum < *best) best = sum;
    }
    return best;
}

}  // namespace

bool verify_certificate(const TelicInstance& inst, unsigned n, const GridPoint& s,
                        const ResourceLimits& limits, OpCounters* counters) {
    if (counters) ++counters->seed_evals;
    auto img = seed_eval(inst, n, s);
    if (!img) return false;
    if (counters) {
        ++counters->orbit_calls;
        counters->orbit_steps += n;
    }
    OrbitResult orb = discretize_orbit(inst.system, {*img, n, inst.v_of(n)}, limits);
    return target_member(inst, n, orb.point, counters);
}

Decision brute_force_decide(const TelicInstance& inst, unsigned n, const ResourceLimits& limits) {
    if (static_cast<unsigned long long>(inst.seeds.d) * n > 24)
        throw resource_limit_error("brute force: seed space exceeds 24 bits");
    Decision dec;
    dec.solver = "brute";
    DeadlineGuard guard(limits.timeout_ms);
    const BigInt side = pow2(n) + 1;
    std::uint64_t tick = 0;
    for (BigInt m = 0; m < side; ++m) {
        if ((++tick & 0xFFFu) == 0) guard.check();
        GridPoint s({m}, n);
        if (verify_certificate(inst, n, s, limits, &dec.counters)) {
            dec.yes = true;
            dec.witness = s;
            break;
        }
    }
    return dec;
}

std::optional<GridPoint> scan_search(const SeedFamily& seeds, unsigned n, const RectUnion& A, unsigned r,
                                     OpCounters* counters) {
    if (static_cast<unsigned long long>(seeds.d) * n > 24)
        throw resource_limit_error("seed scan: seed space exceeds 24 bits");
    if (A.space.dim() != seeds.d) throw data_error("scan_search: target dimension mismatch");
    const unsigned rn = seeds.r_of(n);
    const BigInt side = pow2(n) + 1;
    std::vector<BigInt> coord(seeds.d, 0);
    while (true) {
        std::vector<Rational> sv(seeds.d);
        for (unsigned i = 0; i < seeds.d; ++i) sv[i] = Rational(coord[i], pow2(n));
        if (counters) ++counters->seed_evals;
        auto img = seed_family_image(seeds, n, sv, A.space);
        if (img) {
            std::vector<Rational> vals(seeds.d);
            bool in_space = true;
            for (unsigned i = 0; i < seeds.d && in_space; ++i) {
                auto v = family_grid_value(A.space.axes[i], (*img)[i], rn);
                if (v) vals[i] = *v;
                else in_space = false;
            }
            if (counters) ++counters->membership_checks;
            if (in_space && rect_union_member(A, vals, r)) return GridPoint(coord, n);
        }
        // lex order: axis 0 most significant, so the last axis ticks fastest
        unsigned i = seeds.d;
        while (i > 0) {
            --i;
            if (++coord[i] < side) break;
            coord[i] = 0;
            if (i == 0) return std::nullopt;
        }
    }
}

std::optional<GridPoint> kary_search(const SeedFamily& seeds, unsigned n, const RectUnion& A, unsigned r,
                                     OpCounters* counters) {
    if (A.space.dim() != seeds.d) throw data_error("kary_search: target dimension mismatch");
    if (seeds.d > 16) throw resource_limit_error("kary_search: dimension too large");
    const unsigned d = seeds.d;
    const unsigned rn = seeds.r_of(n);
    auto range = family_image_range(seeds);
    if (!range) return std::nullopt;  // family image is empty
    std::vector<BigInt> lo(d, 0);
    for (unsigned t = 1; t <= n; ++t) {
        BigInt shalf = pow2(n - t);
        std::optional<Rational> best;
        unsigned best_c = 0;
        for (unsigned c = 0; c < (1u << d); ++c) {
            std::vector<Rational> rep(d);
            for (unsigned ax = 0; ax < d; ++ax) {
                BigInt base = lo[ax] + (((c >> (d - 1 - ax)) & 1u) ? shalf : BigInt(0));
                rep[ax] = Rational(2 * base + shalf, pow2(n + 1));  // subcube center
            }
            if (counters) ++counters->seed_evals;
            auto img = seed_family_image(seeds, n, rep, A.space);
            if (!img) continue;  // bottom representative: +infinity distance
            if (counters) ++counters->distance_evals;
            auto dist = descent_distance(A, *img, *range, r);
            if (!dist) continue;
            if (!best || *dist < *best) {
                best = *dist;
                best_c = c;
            }
        }
        for (unsigned ax = 0; ax < d; ++ax)
            if ((best_c >> (d - 1 - ax)) & 1u) lo[ax] += shalf;
    }
    // Test the final cell's corners plus the one-cell neighborhood: the
    // descent steers by center distance, so its landing spot can sit one cell
    // off the member when the target straddles a subdivision boundary.
    const unsigned span = d <= 6 ? 4 : 2;
    const BigInt top = pow2(n);
    std::uint64_t cells = 1;
    for (unsigned ax = 0; ax < d; ++ax) cells *= span;
    for (std::uint64_t c = 0; c < cells; ++c) {
        std::vector<BigInt> coord(d);
        std::vector<Rational> sv(d);
        bool in_grid = true;
        std::uint64_t rem = c;
        for (unsigned ax = d; ax-- > 0;) {
            coord[ax] = lo[ax] + BigInt(rem % span) - (span == 4 ? 1 : 0);
            rem /= span;
            if (coord[ax] < 0 || coord[ax] > top) in_grid = false;
            else sv[ax] = Rational(coord[ax], pow2(n));
        }
        if (!in_grid) continue;
        if (counters) ++counters->seed_evals;
        auto img = seed_family_image(seeds, n, sv, A.space);
        if (!img) continue;
        std::vector<Rational> vals(d);
        bool in_space = true;
        for (unsigned ax = 0; ax < d && in_space; ++ax) {
            auto v = family_grid_value(A.space.axes[ax], (*img)[ax], rn);
            if (v) vals[ax] = *v;
            else in_space = false;
        }
        if (!in_space) continue;
        if (counters) ++counters->membership_checks;
        if (rect_union_member(A, vals, r)) return GridPoint(coord, n);
    }
    // Closed-form kinds are monotone per axis, so a greedy miss is settled
    // exactly by binary search on the rounded-image index.
    return monotone_search(seeds, n, A, r, counters);
}

namespace {

// circle arcs on the lift, with endpoint closure flags encoding the tie rule
struct Arc {
    ExactVal lo = Rational(0), hi = Rational(0);
    bool lo_closed = true, hi_closed = true;
    bool full = false;
};

struct IndexRange {
    BigInt lo, hi;
    bool full = false;
};

ExactVal ev_add(const ExactVal& x, const ExactVal& y) {
    if (std::holds_alternative<Rational>(y)) return ev_add_rational(x, std::get<Rational>(y));
    if (std::holds_alternative<Rational>(x)) return std::get<QuadIrr>(y).add_rational(std::get<Rational>(x));
    auto [irr, rat] = std::get<QuadIrr>(x).add(std::get<QuadIrr>(y));
    if (irr) return *irr;
    return *rat;
}

ExactVal ev_negate(const ExactVal& x) {
    if (std::holds_alternative<Rational>(x)) return -std::get<Rational>(x);
    return std::get<QuadIrr>(x).negate();
}

BigInt ev_floor(const ExactVal& x) {
    if (std::holds_alternative<Rational>(x)) {
        const Rational& q = std::get<Rational>(x);
        return floor_div(num(q), den(q));
    }
    return std::get<QuadIrr>(x).floor();
}

void arc_shift(Arc& a, const ExactVal& delta) {
    if (a.full) return;
    a.lo = ev_add(a.lo, delta);
    a.hi = ev_add(a.hi, delta);
}

void arc_normalize(Arc& a) {
    if (a.full) return;
    Rational k(-ev_floor(a.lo));
    a.lo = ev_add_rational(a.lo, k);
    a.hi = ev_add_rational(a.hi, k);
}

// lift grid indices whose values lie in the arc; normalized so lo < 2^rho
IndexRange indices_in_arc(const Arc& a, unsigned rho, bool& margin) {
    const BigInt P = pow2(rho);
    if (a.full) return {0, P - 1, true};
    IndexRange r;
    if (auto q = ev_rational(a.lo)) {
        Rational t = *q * P;
        if (den(t) == 1) {
            margin = true;  // arc endpoint coincides with a grid value
            r.lo = num(t) + (a.lo_closed ? 0 : 1);
        } else {
            r.lo = floor_div(num(t), den(t)) + 1;
        }
    } else {
        r.lo = std::get<QuadIrr>(a.lo).mul_rational(Rational(P)).floor() + 1;
    }
    if (auto q = ev_rational(a.hi)) {
        Rational t = *q * P;
        if (den(t) == 1) {
            margin = true;
            r.hi = num(t) - (a.hi_closed ? 0 : 1);
        } else {
            r.hi = floor_div(num(t), den(t));
        }
    } else {
        r.hi = std::get<QuadIrr>(a.hi).mul_rational(Rational(P)).floor();
    }
    if (r.hi - r.lo + 1 >= P) return {0, P - 1, true};
    if (r.lo >= P) {
        r.lo -= P;
        r.hi -= P;
    }
    return r;
}

// values rounding into the lift index range [lo, hi] at precision rho
Arc cells_of_range(const IndexRange& ir, unsigned rho) {
    Arc a;
    if (ir.full) {
        a.full = true;
        return a;
    }
    const BigInt P = pow2(rho);
    a.lo = Rational(2 * ir.lo - 1, 2 * P);
    a.lo_closed = (floor_mod(ir.lo, P) == 0);  // the 1-h tie wraps to 0, closing cell(0)
    a.hi = Rational(2 * ir.hi + 1, 2 * P);
    a.hi_closed = (floor_mod(ir.hi + 1, P) != 0);  // top cell loses its boundary to the wrap
    return a;
}

struct Window {
    ExactVal lo, hi;
    bool lo_closed = true, hi_closed = true;
};

// sign of g - bound
int cmp_against(const ExactVal& bound, const Rational& g) { return -ev_compare(bound, g); }

}  // namespace

Decision pullback_decide(const TelicInstance& inst, unsigned n, const ResourceLimits& limits) {
    if (inst.system.kind != SystemKind::Rotation)
        throw not_applicable_error("pullback_decide requires an invertible system");
    if (!inst.seeds.closed_form() || inst.seeds.d != 1)
        throw not_applicable_error("pullback_decide requires one-dimensional closed-form seeds");
    if (inst.base_space.axes[0].kind != SpaceAxis::Kind::Circle)
        throw not_applicable_error("pullback_decide requires a circle base space");
    for (const auto& st : inst.target_pullback)
        if (st.kind != ExactMap1D::Kind::Rotate)
            throw not_applicable_error("pullback_decide requires rotation chains");
    for (const auto& st : inst.seed_post)
        if (st.kind != ExactMap1D::Kind::Rotate)
            throw not_applicable_error("pullback_decide requires rotation chains");

    Decision dec;
    dec.solver = "pullback";
    dec.trace.applicable = true;
    const unsigned v = inst.v_of(n);
    const unsigned rn = inst.seeds.r_of(n);
    const BigInt P = pow2(rn);
    bool margin = false;

    auto rotation_shift = [&](long times) -> ExactVal {
        if (inst.system.rotation_is_rational()) return Rational(times) * std::get<Rational>(inst.system.alpha);
        return std::get<QuadIrr>(inst.system.alpha).mul_rational(Rational(times));
    };

    Rational blo = inst.targets.rect[0][0].eval(n);
    Rational bhi = inst.targets.rect[0][1].eval(n);
    auto hull = target_axis_hull(inst.base_space.axes[0], blo, bhi, v);
    if (!hull) throw data_error("target \xE2\x88\xA9 X = \xE2\x88\x85 at n=" + std::to_string(n));
    IndexRange mem{hull->lo, hull->hi, hull->full};
    if (mem.hi - mem.lo + 1 >= pow2(v)) mem = {0, pow2(v) - 1, true};

    // membership applies the target chain and H^-ell to the query; as pure
    // rotations those collapse to one exact shift, pulled out of the arc here
    ExactVal shift_total = Rational(0);
    for (const auto& st : inst.target_pullback)
        shift_total = ev_add(shift_total, st.rot_irr ? ExactVal(*st.rot_irr) : ExactVal(st.rot));
    if (inst.targets.ell > 0) shift_total = ev_add(shift_total, rotation_shift(-inst.targets.ell));

    Arc arc = cells_of_range(mem, v);
    arc_shift(arc, ev_negate(shift_total));
    arc_normalize(arc);
    mem = indices_in_arc(arc, v, margin);

    // the two inverse-orbit endpoint computations
    dec.counters.orbit_calls += 2;
    dec.counters.orbit_steps += 2ull * n;

    auto no_answer = [&]() {
        dec.yes = false;
        dec.trace.margin_sensitive = margin;
        return dec;
    };
    if (!mem.full && mem.lo > mem.hi) return no_answer();

    // orbit-start window: pull the endpoint set back through n rotation steps
    Arc arc2 = cells_of_range(mem, v);
    arc_shift(arc2, ev_negate(rotation_shift(static_cast<long>(n))));
    arc_normalize(arc2);
    IndexRange vset = indices_in_arc(arc2, rn, margin);
    if (!vset.full && vset.lo > vset.hi) return no_answer();

    // peel the seed-side stages (post stages in reverse, then H^ell)
    std::vector<ExactVal> peel;
    for (auto it = inst.seed_post.rbegin(); it != inst.seed_post.rend(); ++it)
        peel.push_back(it->rot_irr ? ExactVal(*it->rot_irr) : ExactVal(it->rot));
    for (long i = 0; i < inst.targets.ell; ++i) peel.push_back(rotation_shift(1));
    for (const ExactVal& delta : peel) {
        Arc a = cells_of_range(vset, rn);
        arc_shift(a, ev_negate(delta));
        arc_normalize(a);
        vset = indices_in_arc(a, rn, margin);
        if (!vset.full && vset.lo > vset.hi) return no_answer();
    }

    // report the pulled window as grid-value rectangles at r_n
    RectUnion A;
    A.space = SpaceSpec::unit_circle();
    if (vset.full) {
        A.rects = {{{Rational(0), Rational(P - 1, P)}}};
    } else if (vset.hi < P) {
        A.rects = {{{Rational(vset.lo, P), Rational(vset.hi, P)}}};
    } else {
        A.rects = {{{Rational(vset.lo, P), Rational(P - 1, P)}}, {{Rational(0), Rational(vset.hi - P, P)}}};
    }
    for (const auto& rect : A.rects) dec.trace.pulled.push_back({rect[0][0], rect[0][1]});

    // lex-least seed whose raw family image rounds into the window
    Arc G = cells_of_range(vset, rn);

    const int dir = (inst.seeds.kind == SeedKind::Affine && inst.seeds.a[0] < 0) ? -1 : 1;
    auto g_raw = [&](const BigInt& j) -> Rational {
        Rational s(j, pow2(n));
        switch (inst.seeds.kind) {
            case SeedKind::Affine:
                return inst.seeds.a[0] * s + inst.seeds.b[0];
            case SeedKind::Square:
                return s * s;
            default:
                return s;
        }
    };

    std::optional<BigInt> best;
    const BigInt top = pow2(n);
    if (G.full) {
        best = 0;
    } else {
        // the window recurs at every integer lift; only shifts meeting the raw
        // image range [g_min, g_max] can hold a seed
        Rational g_min = g_raw(0), g_max = g_raw(top);
        if (g_min > g_max) std::swap(g_min, g_max);
        BigInt kmin = floor_div(num(g_min), den(g_min)) - 1;
        BigInt kmax = floor_div(num(g_max), den(g_max)) + 1;
        for (BigInt k = kmin; k <= kmax; ++k) {
            Window w{ev_add_rational(G.lo, Rational(k)), ev_add_rational(G.hi, Rational(k)),
                     G.lo_closed, G.hi_closed};
            auto lower_ok = [&](const BigInt& j) {
                dec.counters.seed_evals++;
                int c = cmp_against(w.lo, g_raw(j));
                return c > 0 || (c == 0 && w.lo_closed);
            };
            auto upper_ok = [&](const BigInt& j) {
                dec.counters.seed_evals++;
                int c = cmp_against(w.hi, g_raw(j));
                return c < 0 || (c == 0 && w.hi_closed);
            };
            // the accepted seeds form one contiguous run; binary-search its edge
            BigInt lo = 0, hi = top + 1;  // hi = sentinel "none"
            auto pred = [&](const BigInt& j) { return dir > 0 ? lower_ok(j) : upper_ok(j); };
            while (lo < hi) {
                BigInt mid = (lo + hi) / 2;
                if (pred(mid))
                    hi = mid;
                else
                    lo = mid + 1;
            }
            if (lo > top) continue;
            bool inside = dir > 0 ? upper_ok(lo) : lower_ok(lo);
            if (!inside) continue;
            if (!best || lo < *best) best = lo;
        }
    }

    // the k-ary search drives the same window; cross-check its verdict
    OpCounters kc;
    auto kary = kary_search(inst.seeds, n, A, rn, &kc);
    dec.counters.add(kc);
    dec.trace.kary_mismatch = (kary.has_value() != best.has_value());

    dec.trace.margin_sensitive = margin;
    if (!best) return dec;
    GridPoint s({*best}, n);
    if (!verify_certificate(inst, n, s, limits, &dec.counters))
        throw internal_error("pullback_decide accepted a seed the verifier rejects");
    dec.yes = true;
    dec.witness = s;
    return dec;
}

Decision decide(const TelicInstance& inst, unsigned n, const std::string& solver,
                const ResourceLimits& limits) {
    if (solver == "brute") return brute_force_decide(inst, n, limits);
    if (solver == "pullback") return pullback_decide(inst, n, limits);
    if (solver == "auto") {
        try {
            return pullback_decide(inst, n, limits);
        } catch (const not_applicable_error&) {
            return brute_force_decide(inst, n, limits);
        }
    }
    throw usage_error("unknown solver: " + solver);
}

}  // namespace telic
