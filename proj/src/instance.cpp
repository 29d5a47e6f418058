#include "telic/instance.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "telic/errors.hpp"
#include "telic/halfangle.hpp"

namespace telic {

namespace {

BigInt num(const Rational& r) { return numerator(r); }
BigInt den(const Rational& r) { return denominator(r); }

Rational axis_lo(const SpaceAxis& a) { return a.lo.to_rational(); }
Rational axis_hi(const SpaceAxis& a) { return a.hi.to_rational(); }

}  // namespace

ExactVal ev_add_rational(const ExactVal& v, const Rational& q) {
    if (std::holds_alternative<Rational>(v)) return std::get<Rational>(v) + q;
    return std::get<QuadIrr>(v).add_rational(q);
}

ExactVal ev_affine(const Rational& a, const Rational& b, const ExactVal& v) {
    if (a == 0) return Rational(b);
    if (std::holds_alternative<Rational>(v)) return a * std::get<Rational>(v) + b;
    return std::get<QuadIrr>(v).mul_rational(a).add_rational(b);
}

ExactVal ev_mod1(const ExactVal& v) {
    if (std::holds_alternative<Rational>(v)) return frac1(std::get<Rational>(v));
    return std::get<QuadIrr>(v).mod1();
}

int ev_compare(const ExactVal& v, const Rational& q) {
    if (std::holds_alternative<Rational>(v)) {
        const Rational& r = std::get<Rational>(v);
        return r < q ? -1 : (r == q ? 0 : 1);
    }
    return std::get<QuadIrr>(v).compare_to_rational(q);
}

std::optional<Rational> ev_rational(const ExactVal& v) {
    if (std::holds_alternative<Rational>(v)) return std::get<Rational>(v);
    return std::nullopt;
}

std::string ev_to_string(const ExactVal& v) {
    if (std::holds_alternative<Rational>(v)) return rational_to_string(std::get<Rational>(v));
    return std::get<QuadIrr>(v).to_string();
}

Rational EndpointExpr::eval(unsigned n) const {
    return c + Rational(k, pow2(n));
}

std::string EndpointExpr::to_string() const {
    std::ostringstream os;
    os << rational_to_string(c);
    if (k > 0) {
        for (long i = 0; i < k; ++i) os << " + 2^-n";
    } else {
        for (long i = 0; i < -k; ++i) os << " - 2^-n";
    }
    return os.str();
}

EndpointExpr EndpointExpr::parse(const std::string& s) {
    EndpointExpr e;
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw data_error("empty target endpoint expression");
    std::size_t i = 0;
    bool any = false;
    while (i < t.size()) {
        int sign = 1;
        if (t[i] == '+') {
            ++i;
        } else if (t[i] == '-') {
            sign = -1;
            ++i;
        }
        std::size_t j = i;
        while (j < t.size() && t[j] != '+' && (t[j] != '-' || j == i)) ++j;
        // '-' directly after '^' belongs to the exponent token
        if (j < t.size() && t[j] == '-' && j > 0 && t[j - 1] == '^') {
            ++j;
            while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
        }
        std::string term = t.substr(i, j - i);
        if (term.empty()) throw data_error("malformed endpoint expression: " + s);
        if (term == "2^-n") {
            e.k += sign;
        } else {
            e.c += sign * parse_rational(term);
        }
        any = true;
        i = j;
    }
    if (!any) throw data_error("malformed endpoint expression: " + s);
    return e;
}

EndpointExpr EndpointExpr::constant(const Rational& v) {
    EndpointExpr e;
    e.c = v;
    return e;
}

unsigned SeedFamily::r_of(unsigned n) const {
    unsigned base = n;
    switch (kind) {
        case SeedKind::Identity:
        case SeedKind::Affine:
            base = n;
            break;
        case SeedKind::Square:
            base = 2 * n;
            break;
        case SeedKind::Table:
            base = table_r;
            break;
    }
    return base + (r_widen ? r_widen * n + 2 : 0);
}

ExactVal ExactMap1D::apply(const ExactVal& v) const {
    if (!exact()) throw internal_error("transcendental stage has no exact apply");
    ExactVal out = v;
    if (kind == Kind::Affine) {
        out = ev_affine(a, b, v);
    } else if (rot_irr) {
        if (std::holds_alternative<Rational>(v)) {
            out = rot_irr->add_rational(std::get<Rational>(v));
        } else {
            auto [irr, rat] = std::get<QuadIrr>(v).add(*rot_irr);
            out = irr ? ExactVal(*irr) : ExactVal(*rat);
        }
    } else {
        out = ev_add_rational(v, rot);
    }
    if (out_axis.kind == SpaceAxis::Kind::Circle) out = ev_mod1(out);
    return out;
}

ExactMap1D ExactMap1D::rotate(const Rational& shift, SpaceAxis axis) {
    ExactMap1D m;
    m.kind = Kind::Rotate;
    m.rot = shift;
    m.out_axis = axis;
    return m;
}

ExactMap1D ExactMap1D::rotate_irr(const QuadIrr& shift, SpaceAxis axis) {
    ExactMap1D m;
    m.kind = Kind::Rotate;
    m.rot_irr = shift;
    m.out_axis = axis;
    return m;
}

ExactMap1D ExactMap1D::affine_map(const Rational& a, const Rational& b, SpaceAxis out) {
    if (a == 0) throw data_error("degenerate affine stage");
    ExactMap1D m;
    m.kind = Kind::Affine;
    m.a = a;
    m.b = b;
    m.out_axis = out;
    return m;
}

ExactMap1D ExactMap1D::half_angle(SpaceAxis out) {
    ExactMap1D m;
    m.kind = Kind::HalfAngle;
    m.out_axis = out;
    return m;
}

ExactMap1D ExactMap1D::half_angle_inverse(SpaceAxis out) {
    ExactMap1D m;
    m.kind = Kind::HalfAngleInverse;
    m.out_axis = out;
    return m;
}

unsigned TelicInstance::v_of(unsigned n) const {
    unsigned long long v = static_cast<unsigned long long>(C) * n;
    if (v > (1ull << 20)) throw resource_limit_error("v(n) exceeds the precision budget");
    return static_cast<unsigned>(v);
}

void TelicInstance::validate() const {
    if (C < 1) throw data_error("C must be a positive integer");
    if (system.space.dim() != 1 || base_space.dim() != 1)
        throw data_error("instances are one-dimensional");
    if (seeds.d != 1) throw data_error("instance seed families must have d = 1");
    if (targets.rect.size() != base_space.dim())
        throw data_error("target rectangle dimension mismatch");
    if (targets.ell < 0) throw data_error("wrapper power must be nonnegative");
    if (targets.ell > 0 && !base_system.invertible())
        throw data_error("wrapper power requires an invertible system");
    if (seeds.kind == SeedKind::Affine) {
        if (seeds.a.size() != seeds.d || seeds.b.size() != seeds.d)
            throw data_error("affine seed family needs per-axis coefficients");
        for (const Rational& ai : seeds.a)
            if (ai == 0) throw data_error("affine seed family with zero slope");
    }
    if (seeds.kind == SeedKind::Table) {
        BigInt want = pow2(seeds.table_n) + 1;
        if (BigInt(seeds.table.size()) != want)
            throw data_error("seed table must cover every precision-n seed");
        for (const auto& entry : seeds.table)
            if (entry && !grid_point_valid(*entry, base_space))
                throw data_error("seed table entry outside the base space");
    }
    // closed-form seed images must land in the base space (monotone: corners suffice)
    if (seeds.closed_form()) {
        const SpaceAxis& ax = base_space.axes[0];
        for (int corner = 0; corner <= 1; ++corner) {
            Rational s(corner);
            Rational img = s;
            if (seeds.kind == SeedKind::Affine) img = seeds.a[0] * s + seeds.b[0];
            if (seeds.kind == SeedKind::Square) img = s * s;
            if (ax.kind == SpaceAxis::Kind::Interval && (img < axis_lo(ax) || img > axis_hi(ax)))
                throw data_error("seed images leave the system space");
        }
    }
    // target rectangles must meet the space for generated n (spot-checked range)
    for (unsigned n = 1; n <= 12; ++n) {
        Rational lo = targets.rect[0][0].eval(n);
        Rational hi = targets.rect[0][1].eval(n);
        if (lo > hi) throw data_error("target rectangle inverted at n=" + std::to_string(n));
        if (!target_axis_hull(base_space.axes[0], lo, hi, v_of(n)))
            throw data_error("target \xE2\x88\xA9 X = \xE2\x88\x85 at n=" + std::to_string(n));
    }
}

void OpCounters::add(const OpCounters& o) {
    seed_evals += o.seed_evals;
    orbit_calls += o.orbit_calls;
    orbit_steps += o.orbit_steps;
    membership_checks += o.membership_checks;
    distance_evals += o.distance_evals;
}

BigInt round_circle_lift(const Rational& y, unsigned r) {
    if (y < 0 || y > 1) throw internal_error("round_circle_lift: value outside [0,1]");
    Rational t = y * pow2(r);
    BigInt f = floor_div(num(t), den(t));
    Rational rem = t - Rational(f);
    int cmp = (2 * rem < 1) ? -1 : (2 * rem > 1 ? 1 : 0);
    if (cmp > 0) return f + 1;
    if (cmp < 0) return f;
    // tie: the wrapped-smaller value wins; that is 0 (lift 2^r) when f+1 wraps
    return (f + 1 == pow2(r)) ? f + 1 : f;
}

BigInt round_circle_lift_irr(const QuadIrr& y, unsigned r) {
    if (y.compare_to_rational(0) < 0 || y.compare_to_rational(1) > 0)
        throw internal_error("round_circle_lift_irr: value outside [0,1]");
    QuadIrr t = y.mul_rational(Rational(pow2(r)));
    BigInt f = t.floor();
    return t.compare_to_rational(Rational(2 * f + 1, 2)) > 0 ? f + 1 : f;
}

std::optional<AxisHull> target_axis_hull(const SpaceAxis& axis, const Rational& lo, const Rational& hi,
                                         unsigned v) {
    if (lo > hi) return std::nullopt;
    AxisHull h;
    if (axis.kind == SpaceAxis::Kind::Circle) {
        if (lo < 0 || hi > 1)
            throw data_error("circle target endpoints must lie in [0,1]");
        h.lo = round_circle_lift(lo, v);
        h.hi = round_circle_lift(hi, v);
        if (h.hi - h.lo + 1 >= pow2(v)) h.full = true;
        return h;
    }
    Rational clo = std::max(lo, axis_lo(axis));
    Rational chi = std::min(hi, axis_hi(axis));
    if (clo > chi) return std::nullopt;
    h.lo = round_axis(axis, clo, v);
    h.hi = round_axis(axis, chi, v);
    return h;
}

namespace {

// grid index membership against a hull, wrap-aware on circles
bool hull_member(const SpaceAxis& axis, const AxisHull& h, const BigInt& idx, unsigned v) {
    if (axis.kind == SpaceAxis::Kind::Interval) return h.lo <= idx && idx <= h.hi;
    if (h.full) return true;
    BigInt wrapped = idx + pow2(v);
    return (h.lo <= idx && idx <= h.hi) || (h.lo <= wrapped && wrapped <= h.hi);
}

BigInt ev_round_axis(const SpaceAxis& axis, const ExactVal& val, unsigned r) {
    if (std::holds_alternative<Rational>(val)) return round_axis(axis, std::get<Rational>(val), r);
    const QuadIrr& y = std::get<QuadIrr>(val);
    if (axis.kind == SpaceAxis::Kind::Circle) return round_circle_irrational(y, r);
    QuadIrr t = y.mul_rational(Rational(pow2(r)));
    BigInt f = t.floor();
    BigInt m = t.compare_to_rational(Rational(2 * f + 1, 2)) > 0 ? f + 1 : f;
    return std::clamp(m, axis_index_lo(axis, r), axis_index_hi(axis, r));
}

Rational axis_index_value(const SpaceAxis&, const BigInt& idx, unsigned r) {
    return Rational(idx, pow2(r));
}

// Half-angle stages: sin^2(pi x / 2) is rational at rational x only on a
// five-point table, so certified approximation plus refinement always
// separates every other value from a rounding boundary.
std::optional<Rational> half_angle_special(bool inverse, const Rational& x) {
    static const std::pair<Rational, Rational> fwd[] = {{Rational(0), Rational(0)},
                                                        {Rational(1, 3), Rational(1, 4)},
                                                        {Rational(1, 2), Rational(1, 2)},
                                                        {Rational(2, 3), Rational(3, 4)},
                                                        {Rational(1), Rational(1)}};
    for (const auto& [from, to] : fwd) {
        if (!inverse && x == from) return to;
        if (inverse && x == to) return from;
    }
    return std::nullopt;
}

struct CertVal {
    Rational t;
    Rational err;  // |true value - t| <= err
};

CertVal half_angle_approx(bool inverse, const Rational& x, unsigned m) {
    Rational e = 0;
    Dyadic xd;
    if (auto d = Dyadic::from_rational_exact(x)) {
        xd = *d;
    } else {
        BigInt idx = round_half_down(num(x) * pow2(m + 4), den(x));
        xd = Dyadic(idx, m + 4);
        e = Rational(1, pow2(m + 4));
    }
    if (xd < Dyadic(0)) xd = Dyadic(0);
    if (Dyadic(1) < xd) xd = Dyadic(1);
    if (!inverse) {
        Dyadic v = half_angle_eval(xd, m);
        // the map is 2-Lipschitz, so argument slack enters doubled
        return {v.to_rational(), Rational(1, pow2(m)) + 2 * e};
    }
    // the inverse is only Holder-1/2: residual 2^-(2m+6) gives argument
    // error 2 * sqrt(2^-(2m+6)) = 2^-(m+2)
    Dyadic y = half_angle_inverse(xd, 2 * m + 6);
    Rational err(1, pow2(m + 2));
    if (e != 0) err += Rational(1, pow2((m + 4) / 2 - 1));
    return {y.to_rational(), err};
}

// distance from y to the nearest rounding boundary (odd multiple of
// 2^-(r+1)); interval-edge clamping only widens the safe zone
Rational rounding_gap(const SpaceAxis& axis, const Rational& y, unsigned r) {
    Rational t = (axis.kind == SpaceAxis::Kind::Circle ? frac1(y) : y) * pow2(r);
    BigInt f = floor_div(num(t), den(t));
    Rational d = (t - Rational(f)) - Rational(1, 2);
    if (d < 0) d = -d;
    return d / pow2(r);
}

Rational clamp_to_axis(const SpaceAxis& axis, const Rational& y) {
    if (axis.kind == SpaceAxis::Kind::Circle) return y;
    return std::clamp(y, axis.lo.to_rational(), axis.hi.to_rational());
}

bool outside_axis(const SpaceAxis& axis, const Rational& y) {
    return axis.kind == SpaceAxis::Kind::Interval &&
           (y < axis.lo.to_rational() || y > axis.hi.to_rational());
}

// certified position of an approximate value against an interval axis
enum class EdgeTest { Inside, Outside, Ambiguous };

EdgeTest interval_edge_test(const SpaceAxis& axis, const CertVal& cv) {
    if (axis.kind == SpaceAxis::Kind::Circle) return EdgeTest::Inside;
    Rational alo = axis.lo.to_rational(), ahi = axis.hi.to_rational();
    if (cv.t + cv.err < alo || cv.t - cv.err > ahi) return EdgeTest::Outside;
    if (cv.t - cv.err < alo || cv.t + cv.err > ahi) return EdgeTest::Ambiguous;
    return EdgeTest::Inside;
}

// half-angle stage image rounded on the stage axis at precision r; nullopt
// when the image certifiably exits the axis
std::optional<Rational> adaptive_stage_value(const ExactMap1D& stage, const Rational& x, unsigned r) {
    const bool inverse = stage.kind == ExactMap1D::Kind::HalfAngleInverse;
    auto round_out = [&](const Rational& y) -> std::optional<Rational> {
        if (outside_axis(stage.out_axis, y)) return std::nullopt;
        BigInt idx = round_axis(stage.out_axis, clamp_to_axis(stage.out_axis, y), r);
        if (stage.out_axis.kind == SpaceAxis::Kind::Circle && idx == pow2(r)) idx = 0;
        return Rational(idx, pow2(r));
    };
    if (auto sp = half_angle_special(inverse, x)) return round_out(*sp);
    for (unsigned m = r + 6; m <= (1u << 13); m *= 2) {
        CertVal cv = half_angle_approx(inverse, x, m);
        EdgeTest edge = interval_edge_test(stage.out_axis, cv);
        if (edge == EdgeTest::Outside) return std::nullopt;
        if (edge == EdgeTest::Inside && rounding_gap(stage.out_axis, cv.t, r) > cv.err)
            return round_out(cv.t);
    }
    throw resource_limit_error("half-angle stage rounding stays ambiguous at the precision cap");
}

}  // namespace

std::optional<std::vector<Rational>> seed_family_image(const SeedFamily& seeds, unsigned n,
                                                       const std::vector<Rational>& s_values,
                                                       const SpaceSpec& image_space) {
    if (s_values.size() != seeds.d || image_space.dim() != seeds.d)
        throw data_error("seed dimension mismatch");
    switch (seeds.kind) {
        case SeedKind::Identity:
            return s_values;
        case SeedKind::Affine: {
            std::vector<Rational> out(seeds.d);
            for (unsigned i = 0; i < seeds.d; ++i) out[i] = seeds.a[i] * s_values[i] + seeds.b[i];
            return out;
        }
        case SeedKind::Square: {
            std::vector<Rational> out(seeds.d);
            for (unsigned i = 0; i < seeds.d; ++i) out[i] = s_values[i] * s_values[i];
            return out;
        }
        case SeedKind::Table: {
            if (n != seeds.table_n)
                throw data_error("seed table defined only for n=" + std::to_string(seeds.table_n));
            // snap to the nearest seed (ties to the lower index)
            Rational t = s_values[0] * pow2(n);
            BigInt m = round_half_down(num(t), den(t));
            m = std::clamp(m, BigInt(0), pow2(n));
            const auto& entry = seeds.table[static_cast<std::size_t>(m)];
            if (!entry) return std::nullopt;
            return entry->values();
        }
    }
    return std::nullopt;
}

std::optional<Rational> seed_image_value(const TelicInstance& inst, unsigned n, const Rational& s_value) {
    const unsigned rn = inst.seeds.r_of(n);
    auto raw = seed_family_image(inst.seeds, n, {s_value}, inst.base_space);
    if (!raw) return std::nullopt;
    const SpaceAxis& base_axis = inst.base_space.axes[0];
    // stage images that exit the space are bottom, not errors
    if (outside_axis(base_axis, (*raw)[0])) return std::nullopt;
    BigInt idx = round_axis(base_axis, (*raw)[0], rn);
    Rational val = axis_index_value(base_axis, idx, rn);
    for (long i = 0; i < inst.targets.ell; ++i) {
        ExactVal ev = val;
        if (inst.base_system.rotation_is_rational()) {
            ev = ev_mod1(ev_add_rational(ev, std::get<Rational>(inst.base_system.alpha)));
        } else {
            ExactMap1D rot = ExactMap1D::rotate_irr(std::get<QuadIrr>(inst.base_system.alpha), base_axis);
            ev = rot.apply(ev);
        }
        idx = ev_round_axis(base_axis, ev, rn);
        if (base_axis.kind == SpaceAxis::Kind::Circle && idx == pow2(rn)) idx = 0;
        val = axis_index_value(base_axis, idx, rn);
    }
    for (const ExactMap1D& stage : inst.seed_post) {
        if (!stage.exact()) {
            auto staged = adaptive_stage_value(stage, val, rn);
            if (!staged) return std::nullopt;
            val = *staged;
            continue;
        }
        ExactVal ev = stage.apply(val);
        if (stage.out_axis.kind == SpaceAxis::Kind::Interval) {
            if (ev_compare(ev, stage.out_axis.lo.to_rational()) < 0 ||
                ev_compare(ev, stage.out_axis.hi.to_rational()) > 0)
                return std::nullopt;
        }
        idx = ev_round_axis(stage.out_axis, ev, rn);
        if (stage.out_axis.kind == SpaceAxis::Kind::Circle && idx == pow2(rn)) idx = 0;
        val = axis_index_value(stage.out_axis, idx, rn);
    }
    return val;
}

std::optional<GridPoint> seed_eval(const TelicInstance& inst, unsigned n, const GridPoint& s) {
    if (s.dim() != inst.seeds.d || s.r != n) throw data_error("seed_eval: malformed seed");
    for (const BigInt& m : s.coords)
        if (m < 0 || m > pow2(n)) throw data_error("seed_eval: seed outside I_n");
    auto val = seed_image_value(inst, n, s.values()[0]);
    if (!val) return std::nullopt;
    const unsigned rn = inst.seeds.r_of(n);
    Rational t = *val * pow2(rn);
    if (den(t) != 1) throw internal_error("seed pipeline produced an off-grid value");
    return GridPoint({num(t)}, rn);
}

namespace {

// smallest power-of-two bound for the Holder-1/2 envelope 2*sqrt(e)
Rational holder_bump(const Rational& e) {
    if (e == 0) return 0;
    unsigned g = 0;
    while (g < 4096 && Rational(1, pow2(2 * (g + 1))) >= e) ++g;
    return Rational(2, pow2(g));
}

}  // namespace

bool target_member(const TelicInstance& inst, unsigned n, const GridPoint& x, OpCounters* counters) {
    const unsigned v = inst.v_of(n);
    if (x.r != v || x.dim() != 1) throw data_error("target_member: query not at precision v(n)");
    if (counters) ++counters->membership_checks;

    const SpaceAxis& axis = inst.base_space.axes[0];
    Rational lo = inst.targets.rect[0][0].eval(n);
    Rational hi = inst.targets.rect[0][1].eval(n);
    auto hull = target_axis_hull(axis, lo, hi, v);
    if (!hull) throw data_error("target \xE2\x88\xA9 X = \xE2\x88\x85 at n=" + std::to_string(n));

    bool all_exact = true;
    for (const ExactMap1D& stage : inst.target_pullback)
        if (!stage.exact()) all_exact = false;

    auto finish_exact = [&](const ExactVal& val) {
        if (axis.kind == SpaceAxis::Kind::Interval &&
            (ev_compare(val, axis.lo.to_rational()) < 0 || ev_compare(val, axis.hi.to_rational()) > 0))
            return false;  // pulled back outside the base space
        BigInt idx = ev_round_axis(axis, axis.kind == SpaceAxis::Kind::Circle ? ev_mod1(val) : val, v);
        if (axis.kind == SpaceAxis::Kind::Circle && idx == pow2(v)) idx = 0;
        return hull_member(axis, *hull, idx, v);
    };
    auto pull_wrapper = [&](ExactVal val) {
        for (long i = 0; i < inst.targets.ell; ++i) {
            if (inst.base_system.rotation_is_rational()) {
                val = ev_mod1(ev_add_rational(val, -std::get<Rational>(inst.base_system.alpha)));
            } else {
                ExactMap1D rot = ExactMap1D::rotate_irr(std::get<QuadIrr>(inst.base_system.alpha).negate(),
                                                        inst.base_space.axes[0]);
                val = rot.apply(val);
            }
        }
        return val;
    };

    if (all_exact) {
        ExactVal val = x.values()[0];
        for (const ExactMap1D& stage : inst.target_pullback) val = stage.apply(val);
        return finish_exact(pull_wrapper(val));
    }

    // Transcendental chains: instead of pulling the query back through the
    // Holder-1/2 inverse (which would halve the certified precision), map the
    // hull's cell union forward through the stage inverses and compare the
    // exact query value against the certified window endpoints. Endpoint
    // images refine without bound because the map carries rationals to
    // rationals only on its special table.
    if (axis.kind != SpaceAxis::Kind::Interval)
        throw data_error("half-angle pullback chains need an interval base");
    if (inst.targets.ell != 0) throw data_error("half-angle pullback chains cannot carry a wrapper");

    // round-half-down cells are half-open (k-1/2, k+1/2] around the grid
    // value, so the hull's cell union is an interval clipped to the axis
    struct End {
        Rational t;
        Rational err;
        bool is_exact;
        bool closed;
    };
    const Rational alo = axis.lo.to_rational(), ahi = axis.hi.to_rational();
    const Rational cl = Rational(2 * hull->lo - 1, pow2(v + 1));
    const Rational ch = Rational(2 * hull->hi + 1, pow2(v + 1));
    const End wlo0 = cl < alo ? End{alo, 0, true, true} : End{cl, 0, true, false};
    const End whi0 = ch > ahi ? End{ahi, 0, true, true} : End{ch, 0, true, true};
    const Rational q = x.values()[0];

    for (unsigned m = v + 6; m <= (1u << 13); m *= 2) {
        End elo = wlo0, ehi = whi0;
        for (auto it = inst.target_pullback.rbegin(); it != inst.target_pullback.rend(); ++it) {
            const ExactMap1D& stage = *it;
            if (stage.kind == ExactMap1D::Kind::Rotate)
                throw data_error("half-angle chains cannot mix circle stages");
            if (stage.kind == ExactMap1D::Kind::Affine) {
                for (End* e : {&elo, &ehi}) {
                    e->t = (e->t - stage.b) / stage.a;
                    e->err /= abs(stage.a);
                }
                // a decreasing stage swaps the endpoints, closures included
                if (stage.a < 0) std::swap(elo, ehi);
                continue;
            }
            // inverse of the half-angle stage is the opposite half-angle
            // kind; both branches are increasing, so no swap
            const bool inv = stage.kind == ExactMap1D::Kind::HalfAngle;
            for (End* e : {&elo, &ehi}) {
                if (e->is_exact) {
                    if (auto sp = half_angle_special(inv, e->t)) {
                        e->t = *sp;
                        continue;
                    }
                    CertVal cv = half_angle_approx(inv, e->t, m);
                    *e = {cv.t, cv.err, false, e->closed};
                } else {
                    CertVal cv = half_angle_approx(inv, e->t, m);
                    cv.err += inv ? holder_bump(e->err) : 2 * e->err;
                    *e = {cv.t, cv.err, false, e->closed};
                }
            }
        }
        // q against the window; a certified endpoint never equals the
        // rational q, so refinement resolves every comparison eventually
        int side_lo = 0, side_hi = 0;  // -1 outside, +1 inside, 0 unresolved
        if (elo.is_exact)
            side_lo = (q > elo.t || (q == elo.t && elo.closed)) ? 1 : -1;
        else if (q > elo.t + elo.err)
            side_lo = 1;
        else if (q < elo.t - elo.err)
            side_lo = -1;
        if (ehi.is_exact)
            side_hi = (q < ehi.t || (q == ehi.t && ehi.closed)) ? 1 : -1;
        else if (q < ehi.t - ehi.err)
            side_hi = 1;
        else if (q > ehi.t + ehi.err)
            side_hi = -1;
        if (side_lo < 0 || side_hi < 0) return false;
        if (side_lo > 0 && side_hi > 0) return true;
    }
    throw resource_limit_error("half-angle pullback stays ambiguous at the precision cap");
}

bool rect_union_member(const RectUnion& u, const std::vector<Rational>& value, unsigned r) {
    for (const auto& rect : u.rects) {
        bool all = true;
        for (std::size_t ax = 0; ax < u.space.dim(); ++ax) {
            const SpaceAxis& axis = u.space.axes[ax];
            auto hull = target_axis_hull(axis, rect[ax][0], rect[ax][1], r);
            if (!hull) {
                all = false;
                break;
            }
            Rational xv = (axis.kind == SpaceAxis::Kind::Circle) ? frac1(value[ax]) : value[ax];
            BigInt idx = round_axis(axis, xv, r);
            if (!hull_member(axis, *hull, idx, r)) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

std::optional<SqrtRational> rect_union_distance(const RectUnion& u, const std::vector<Rational>& value,
                                                unsigned r) {
    std::optional<SqrtRational> best;
    for (const auto& rect : u.rects) {
        Rational sum = 0;
        bool empty = false;
        for (std::size_t ax = 0; ax < u.space.dim(); ++ax) {
            const SpaceAxis& axis = u.space.axes[ax];
            auto hull = target_axis_hull(axis, rect[ax][0], rect[ax][1], r);
            if (!hull) {
                empty = true;
                break;
            }
            Rational d;
            if (axis.kind == SpaceAxis::Kind::Interval) {
                Rational vlo = axis_index_value(axis, hull->lo, r);
                Rational vhi = axis_index_value(axis, hull->hi, r);
                d = 0;
                if (value[ax] < vlo) d = vlo - value[ax];
                if (value[ax] > vhi) d = value[ax] - vhi;
            } else {
                Rational x = frac1(value[ax]);
                Rational vlo = frac1(axis_index_value(axis, hull->lo, r));
                Rational vhi = frac1(axis_index_value(axis, hull->hi, r));
                // inside the closed arc [vlo, vhi] (wrap-aware)?
                Rational rel = frac1(x - vlo);
                Rational len = frac1(vhi - vlo);
                if (hull->full || rel <= len) {
                    d = 0;
                } else {
                    Rational fwd = frac1(vlo - x);
                    Rational bwd = frac1(x - vhi);
                    d = std::min(fwd, bwd);
                }
            }
            sum += d * d;
        }
        if (empty) continue;
        SqrtRational cand{sum};
        if (!best || cand.compare(*best) < 0) best = cand;
    }
    return best;
}

NeighborhoodReport check_neighborhood_preservation(const SeedFamily& seeds, unsigned n) {
    NeighborhoodReport rep;
    if (static_cast<unsigned long long>(seeds.d) * n > 20)
        throw resource_limit_error("neighborhood check: seed space too large");
    SpaceSpec img_space;
    for (unsigned i = 0; i < seeds.d; ++i) img_space.axes.push_back(SpaceAxis::interval(0, 1));
    if (seeds.kind == SeedKind::Table) img_space = SpaceSpec{{SpaceAxis::interval(0, 1)}};

    const BigInt side = pow2(n) + 1;
    // scan every axis-parallel line of I_n^d; monotone order per line
    for (unsigned axis = 0; axis < seeds.d; ++axis) {
        std::vector<BigInt> fixed(seeds.d, 0);
        while (true) {
            int dir = 0;
            std::optional<Rational> prev;
            BigInt prev_idx = -1;
            for (BigInt m = 0; m < side; ++m) {
                std::vector<Rational> sv(seeds.d);
                std::vector<BigInt> coord(seeds.d);
                for (unsigned i = 0; i < seeds.d; ++i) {
                    coord[i] = (i == axis) ? m : fixed[i];
                    sv[i] = Rational(coord[i], pow2(n));
                }
                auto img = seed_family_image(seeds, n, sv, img_space);
                if (!img) continue;
                Rational cur = (*img)[axis >= img->size() ? 0 : axis];
                if (prev) {
                    int step = (cur > *prev) ? 1 : (cur < *prev ? -1 : 0);
                    if (dir == 0) dir = step;
                    if (step != 0 && dir != 0 && step != dir) {
                        rep.ok = false;
                        std::vector<BigInt> pc(seeds.d);
                        for (unsigned i = 0; i < seeds.d; ++i) pc[i] = (i == axis) ? prev_idx : fixed[i];
                        rep.violation = {GridPoint(pc, n), GridPoint(coord, n)};
                        rep.note = "image order broken along axis " + std::to_string(axis);
                        return rep;
                    }
                    if (prev_idx + 1 == m) {
                        Rational spread = cur > *prev ? cur - *prev : *prev - cur;
                        if (spread > rep.delta) rep.delta = spread;
                    }
                }
                prev = cur;
                prev_idx = m;
            }
            // advance the fixed coordinates (odometer over the other axes)
            unsigned i = 0;
            for (; i < seeds.d; ++i) {
                if (i == axis) continue;
                if (++fixed[i] < side) break;
                fixed[i] = 0;
            }
            if (i >= seeds.d) break;
        }
    }
    return rep;
}

}  // namespace telic
