#include <random>
#include <sstream>

#include "telic/entropy.hpp"
#include "telic/errors.hpp"
#include "telic/harness.hpp"
#include "telic/reductions.hpp"
#include "telic/solvers.hpp"

namespace telic {

namespace {

struct Suite {
    CheckReport& rep;
    std::string name;

    void pass(const std::string& what) { rep.lines.push_back(name + "." + what + ": pass"); }
    void fail(const std::string& what, const std::string& detail, const std::string& repro = "") {
        rep.passed = false;
        std::string line = name + "." + what + ": FAIL " + detail;
        if (!repro.empty()) line += " | repro: " + repro;
        rep.lines.push_back(line);
    }
    void check(const std::string& what, bool ok, const std::string& detail,
               const std::string& repro = "") {
        if (ok)
            pass(what);
        else
            fail(what, detail, repro);
    }
};

BigInt random_bits(std::mt19937_64& rng, unsigned bits) {
    BigInt v = 0;
    for (unsigned got = 0; got < bits; got += 64) v = (v << 64) | BigInt(std::uint64_t(rng()));
    v >>= (64 - bits % 64) % 64;
    return rng() & 1 ? -v : v;
}

void suite_dyadic(CheckReport& rep) {
    Suite s{rep, "dyadic"};
    std::mt19937_64 rng(0x5eed0001);
    bool ring = true, canon = true;
    std::string detail;
    for (int trial = 0; trial < 200 && ring && canon; ++trial) {
        unsigned bits = 1 + unsigned(rng() % 512);
        Dyadic a(random_bits(rng, bits), unsigned(rng() % 64));
        Dyadic b(random_bits(rng, bits / 2 + 1), unsigned(rng() % 64));
        Dyadic c(random_bits(rng, 32), unsigned(rng() % 16));
        if ((a + b) - b != a || a + b != b + a || (a + b) + c != a + (b + c) ||
            a * (b + c) != a * b + a * c || a * b != b * a) {
            ring = false;
            detail = "ring identity broke at trial " + std::to_string(trial);
        }
        for (const Dyadic& d : {a + b, a * b, a - c})
            if (d.exponent() != 0 && d.mantissa() % 2 == 0) canon = false;
    }
    s.check("ring-laws", ring, detail);
    s.check("canonical-form", canon, "a result had an even mantissa with q > 0");
    s.check("tie-rule", round_half_down(BigInt(1), BigInt(2)) == 0 &&
                            round_half_down(BigInt(3), BigInt(2)) == 1 &&
                            round_half_down(BigInt(-1), BigInt(2)) == -1,
            "round_half_down ties must go to the smaller integer");
}

void suite_discretize(CheckReport& rep) {
    Suite s{rep, "discretize"};

    // exact mode agrees with the rational orbit bit for bit
    bool exact_ok = true;
    std::string detail;
    for (const SystemSpec& spec :
         {SystemSpec::doubling(), SystemSpec::tent(), SystemSpec::rotation(Rational(1, 4))}) {
        const SpaceAxis& axis = spec.space.axes[0];
        for (unsigned r = 0; r <= 5 && exact_ok; ++r) {
            BigInt lo = axis_index_lo(axis, r), hi = axis_index_hi(axis, r);
            for (BigInt m = lo; m <= hi && exact_ok; ++m) {
                for (unsigned k = 0; k <= 6 && exact_ok; ++k) {
                    OrbitResult got = discretize_orbit(spec, {GridPoint({m}, r), k, r});
                    Rational x(m, pow2(r));
                    for (unsigned j = 0; j < k; ++j) x = step_exact(spec, x);
                    GridPoint want = round_to_grid(std::vector<Rational>{x}, spec.space, r);
                    if (got.point.coords[0] != want.coords[0] || !got.trace.exact) {
                        exact_ok = false;
                        detail = spec.id() + " start (" + m.str() + ")@" + std::to_string(r) +
                                 " k=" + std::to_string(k);
                    }
                }
            }
        }
    }
    s.check("exact-orbit", exact_ok, detail,
            "telic-lab iterate --system '{\"kind\":\"doubling\"}' --start <pt> --k <k> --r <r>");

    // approximate orbits stay within 2^-r of an exact rational recomputation
    bool close_ok = true;
    SystemSpec logi = SystemSpec::logistic(4);
    for (unsigned r = 2; r <= 4 && close_ok; ++r) {
        for (BigInt m = 0; m <= pow2(r) && close_ok; ++m) {
            for (unsigned k = 1; k <= 4 && close_ok; ++k) {
                OrbitResult got = discretize_orbit(logi, {GridPoint({m}, r), k, r});
                Rational x(m, pow2(r));
                for (unsigned j = 0; j < k; ++j) x = step_exact(logi, x);
                Rational diff = Rational(got.point.coords[0], pow2(r)) - x;
                if (diff < 0) diff = -diff;
                if (diff > Rational(1, pow2(r))) {
                    close_ok = false;
                    detail = "logistic(4) start (" + m.str() + ")@" + std::to_string(r) +
                             " k=" + std::to_string(k);
                }
            }
        }
    }
    s.check("orbit-tolerance", close_ok, detail);

    // doubling and tent carry the precision-r grid into itself exactly
    bool dyadic_ok = true;
    for (const SystemSpec& spec : {SystemSpec::doubling(), SystemSpec::tent()}) {
        for (unsigned r = 0; r <= 8 && dyadic_ok; ++r) {
            BigInt lo = axis_index_lo(spec.space.axes[0], r), hi = axis_index_hi(spec.space.axes[0], r);
            for (BigInt m = lo; m <= hi && dyadic_ok; ++m) {
                Rational y = step_exact(spec, Rational(m, pow2(r)));
                auto d = Dyadic::from_rational_exact(y);
                if (!d || d->exponent() > r) dyadic_ok = false;
            }
        }
    }
    s.check("grid-preservation", dyadic_ok, "a doubling/tent step left the dyadic grid");

    // inverse identity for rotations
    bool inv_ok = true;
    SystemSpec rotq = SystemSpec::rotation(Rational(1, 4));
    for (BigInt m = 0; m < 64 && inv_ok; ++m) {
        Rational x(m, 64);
        if (step_inverse_exact(rotq, step_exact(rotq, x)) != x) inv_ok = false;
    }
    SystemSpec roti = SystemSpec::rotation(QuadIrr(BigInt(-1), BigInt(1), BigInt(1), BigInt(2)));
    const unsigned w = 24;
    for (BigInt m = 0; m < 64 && inv_ok; ++m) {
        Dyadic x(m, 6);
        Rational back = step_inverse_approx(roti, step_approx(roti, x, w), w).to_rational();
        Rational diff = frac1(back - x.to_rational());
        if (diff > Rational(1, 2)) diff = 1 - diff;
        if (diff > Rational(2, pow2(w))) inv_ok = false;
    }
    s.check("inverse-identity", inv_ok, "step_inverse did not undo step");
}

void suite_neighborhood(CheckReport& rep) {
    Suite s{rep, "neighborhood"};
    auto run = [&](const char* what, SeedFamily seeds, unsigned n_max) {
        for (unsigned n = 1; n <= n_max; ++n) {
            NeighborhoodReport r = check_neighborhood_preservation(seeds, n);
            if (!r.ok) {
                s.fail(what, "violated at n=" + std::to_string(n) + " (" + r.note + ")");
                return;
            }
        }
        s.pass(what);
    };
    SeedFamily identity;
    run("identity-d1", identity, 8);
    SeedFamily affine;
    affine.kind = SeedKind::Affine;
    affine.a = {Rational(3, 4)};
    affine.b = {Rational(1, 8)};
    run("affine-d1", affine, 8);
    SeedFamily affneg;
    affneg.kind = SeedKind::Affine;
    affneg.a = {Rational(-1, 2)};
    affneg.b = {Rational(3, 4)};
    run("affine-negative-d1", affneg, 8);
    SeedFamily square;
    square.kind = SeedKind::Square;
    run("square-d1", square, 8);
    SeedFamily id2;
    id2.d = 2;
    run("identity-d2", id2, 4);
}

TelicInstance rotation_fixture(const SystemSpec& sys, long C) {
    TelicInstance inst;
    inst.system = sys;
    inst.base_system = sys;
    inst.base_space = sys.space;
    inst.seeds.kind = SeedKind::Identity;
    inst.targets.rect = {{EndpointExpr::constant(Rational(0)), EndpointExpr::constant(Rational(1, 8))}};
    inst.C = C;
    inst.id = "rotation-fixture";
    inst.validate();
    return inst;
}

void suite_solvers(CheckReport& rep) {
    Suite s{rep, "solvers"};

    // brute force and pullback agree, witnesses included
    for (bool irrational : {false, true}) {
        SystemSpec sys = irrational
                             ? SystemSpec::rotation(QuadIrr(BigInt(-1), BigInt(1), BigInt(1), BigInt(2)))
                             : SystemSpec::rotation(Rational(1, 4));
        TelicInstance inst = rotation_fixture(sys, 1);
        bool ok = true;
        std::string detail;
        for (unsigned n = 1; n <= (irrational ? 8u : 10u) && ok; ++n) {
            Decision a = brute_force_decide(inst, n);
            Decision b = pullback_decide(inst, n);
            if (a.yes != b.yes ||
                (a.yes && a.witness->coords[0] != b.witness->coords[0])) {
                ok = false;
                detail = "n=" + std::to_string(n) + " brute=" + (a.yes ? "YES" : "NO") +
                         " pullback=" + (b.yes ? "YES" : "NO");
            }
            if (a.yes && !verify_certificate(inst, n, *a.witness)) {
                ok = false;
                detail = "witness failed verification at n=" + std::to_string(n);
            }
        }
        s.check(irrational ? "agreement-irrational" : "agreement-rational", ok, detail,
                "telic-lab decide --instance instances/rotation_q.json --n <n> --solver auto");
    }

    // greedy k-ary descent matches the linear scan on random rectangles
    std::mt19937_64 rng(0x5eed0002);
    bool kary_ok = true;
    std::string kdetail;
    for (int trial = 0; trial < 60 && kary_ok; ++trial) {
        unsigned d = trial % 3 == 2 ? 2 : 1;
        unsigned n = 1 + unsigned(rng() % (d == 1 ? 7 : 3));
        SeedFamily seeds;
        seeds.d = d;
        if (d == 1) {
            unsigned pick = unsigned(rng() % 3);
            if (pick == 1) seeds.kind = SeedKind::Square;
            if (pick == 2) {
                seeds.kind = SeedKind::Affine;
                seeds.a = {Rational(1 + long(rng() % 3), 2)};
                seeds.b = {Rational(long(rng() % 4), 4)};
            }
        }
        RectUnion A;
        A.space = SpaceSpec::circle_power(d);
        std::vector<std::array<Rational, 2>> rect;
        for (unsigned ax = 0; ax < d; ++ax) {
            Rational lo(long(rng() % 64), 64);
            Rational hi = lo + Rational(1 + long(rng() % 16), 64);
            if (hi > 1) hi = 1;
            rect.push_back({lo, hi});
        }
        A.rects.push_back(rect);
        unsigned r = seeds.r_of(n);
        auto got = kary_search(seeds, n, A, r);
        auto want = scan_search(seeds, n, A, r);
        // presence must agree; any seed kary returns must itself be a member
        bool sound = true;
        if (got) {
            std::vector<Rational> sv(d), vals(d);
            for (unsigned ax = 0; ax < d; ++ax) sv[ax] = Rational(got->coords[ax], pow2(n));
            auto img = seed_family_image(seeds, n, sv, A.space);
            sound = img.has_value();
            for (unsigned ax = 0; sound && ax < d; ++ax) {
                auto v = family_grid_value(A.space.axes[ax], (*img)[ax], seeds.r_of(n));
                if (v) vals[ax] = *v;
                else sound = false;
            }
            if (sound) sound = rect_union_member(A, vals, r);
        }
        if (got.has_value() != want.has_value() || !sound) {
            kary_ok = false;
            kdetail = "trial " + std::to_string(trial) + " d=" + std::to_string(d) +
                      " n=" + std::to_string(n);
        }
    }
    s.check("kary-vs-scan", kary_ok, kdetail);

    // verifier stays polynomial: counters under c * n^3
    TelicInstance inst = rotation_fixture(SystemSpec::rotation(Rational(1, 4)), 1);
    bool poly_ok = true;
    std::uint64_t c = 0;
    for (unsigned n = 4; n <= 12; ++n) {
        OpCounters counters;
        GridPoint seed({BigInt(0)}, n);
        verify_certificate(inst, n, seed, {}, &counters);
        std::uint64_t total = counters.seed_evals + counters.orbit_calls + counters.orbit_steps +
                              counters.membership_checks;
        if (n == 4) c = 2 * total / 64 + 1;
        if (total > c * std::uint64_t(n) * n * n) poly_ok = false;
    }
    s.check("verifier-polynomial", poly_ok, "verify_certificate counters exceeded c*n^3");
}

void suite_reductions(CheckReport& rep, const ConjugacySpec* override_phi) {
    Suite s{rep, "reductions"};
    ConjugacySpec phi = override_phi ? *override_phi : ConjugacySpec::logistic_to_quadratic();

    if (phi.kind == ConjugacySpec::Kind::HalfAngle && !phi.enabled) {
        bool gated = false;
        TelicInstance src;
        src.system = phi.source;
        src.base_system = phi.source;
        src.base_space = phi.source.space;
        src.targets.rect = {{EndpointExpr::constant(Rational(1, 5)), EndpointExpr::constant(Rational(2, 5))}};
        src.validate();
        try {
            conjugate_instance(src, phi);
        } catch (const data_error&) {
            gated = true;
        }
        s.check("half-angle-gate", gated, "a disabled half-angle conjugacy was applied");
        return;
    }

    ConjugacyReport v = validate_conjugacy(phi);
    {
        std::string detail = "checked " + std::to_string(v.points_checked) + " points";
        if (!v.equation_violations.empty())
            detail += "; first equation violation at x=" +
                      rational_to_string(v.equation_violations.front().first);
        if (!v.inverse_pair.passed && v.note.empty()) detail += "; inverse pair failed";
        s.check("conjugacy-valid", v.passed, detail);
    }

    // answer preservation under the conjugacy, brute force on both sides
    const SpaceAxis& ax = phi.source.space.axes[0];
    Rational span = ax.hi.to_rational() - ax.lo.to_rational();
    TelicInstance src;
    src.system = phi.source;
    src.base_system = phi.source;
    src.base_space = phi.source.space;
    src.targets.rect = {{EndpointExpr::constant(ax.lo.to_rational() + span / 5),
                         EndpointExpr::constant(ax.lo.to_rational() + 2 * span / 5)}};
    src.id = "conjugacy-fixture";
    src.validate();
    TelicInstance dst = conjugate_instance(src, phi);
    ReductionReport pres = check_reduction(src, dst, 6);
    s.check("answer-preservation", pres.passed, pres.note,
            "telic-lab check-reduction --a <src.json> --b <dst.json> --n-max 6");

    if (phi.kind == ConjugacySpec::Kind::Affine) {
        TelicInstance back = conjugate_instance(dst, phi.inverse());
        ReductionReport comp = check_reduction(src, back, 6);
        s.check("composition", comp.passed, comp.note);
    }

    // shift reduction on an invertible system (C=2 keeps queries off rounding ties)
    TelicInstance rot = rotation_fixture(SystemSpec::rotation(Rational(1, 4)), 2);
    ReductionReport sh = check_reduction(rot, shift_instance(rot, 2), 8);
    s.check("shift-preservation", sh.passed, sh.note);
    TelicInstance rotsq = rot;
    rotsq.seeds.kind = SeedKind::Square;
    rotsq.validate();
    ReductionReport grp =
        check_reduction(shift_instance(shift_instance(rotsq, 1), 2), shift_instance(rotsq, 3), 8);
    s.check("shift-group-law", grp.passed, grp.note);
}

void suite_entropy(CheckReport& rep) {
    Suite s{rep, "entropy"};

    // greedy sandwich against the exhaustive oracle on small grids
    bool sandwich_ok = true, monotone_ok = true;
    std::string detail;
    for (const SystemSpec& spec :
         {SystemSpec::doubling(), SystemSpec::tent(), SystemSpec::rotation(Rational(1, 4))}) {
        unsigned r_max = spec.space.axes[0].kind == SpaceAxis::Kind::Circle ? 6 : 5;
        for (unsigned r = 3; r <= r_max; ++r) {
            unsigned prev_max = 0;
            for (unsigned n = 1; n <= 4; ++n) {
                std::uint64_t prev_greedy = ~std::uint64_t(0);
                for (unsigned eb = 3; eb >= 2; --eb) {
                    Dyadic eps(BigInt(1), eb);
                    std::uint64_t g = greedy_separated_set(spec, n, eps, r).size();
                    unsigned hi = max_separated_count(spec, n, eps, r);
                    unsigned lo = max_separated_count(spec, n, Dyadic(BigInt(1), eb - 1), r);
                    if (!(lo <= g && g <= hi)) {
                        sandwich_ok = false;
                        detail = spec.id() + " r=" + std::to_string(r) + " n=" + std::to_string(n) +
                                 " eps=2^-" + std::to_string(eb);
                    }
                    if (g > prev_greedy) monotone_ok = false;  // larger eps, count must not grow
                    prev_greedy = g;
                }
                unsigned cur = max_separated_count(spec, n, Dyadic(BigInt(1), 3), r);
                if (cur < prev_max) monotone_ok = false;
                prev_max = cur;
            }
        }
    }
    s.check("sandwich", sandwich_ok, detail,
            "telic-lab entropy --system '{\"kind\":\"tent\"}' --eps 2^-3 --n 1..4 --r 5");
    s.check("monotonicity", monotone_ok, "counts moved the wrong way in n or eps");

    // rotations are isometries: counts flat in n
    auto series = entropy_estimate(SystemSpec::rotation(QuadIrr(BigInt(-1), BigInt(1), BigInt(1), BigInt(2))),
                                   1, 6, Dyadic(BigInt(1), 3), 10);
    bool flat = true;
    for (const auto& row : series)
        if (row.count != series.front().count) flat = false;
    s.check("isometry-flatness", flat, "rotation counts varied with n");

    // metric axioms on sampled triples
    std::mt19937_64 rng(0x5eed0003);
    bool axioms_ok = true;
    const unsigned w = 20;
    Rational slack(4, pow2(w));
    for (const SystemSpec& spec : {SystemSpec::doubling(), SystemSpec::logistic(4)}) {
        for (int trial = 0; trial < 40 && axioms_ok; ++trial) {
            Rational x(long(rng() % 65), 64), y(long(rng() % 65), 64), z(long(rng() % 65), 64);
            if (spec.space.axes[0].kind == SpaceAxis::Kind::Circle) {
                x = frac1(x);
                y = frac1(y);
                z = frac1(z);
            }
            unsigned n = 1 + unsigned(rng() % 5);
            Rational dxy = bowen_distance(spec, x, y, n, w).to_rational();
            Rational dyx = bowen_distance(spec, y, x, n, w).to_rational();
            Rational dxz = bowen_distance(spec, x, z, n, w).to_rational();
            Rational dyz = bowen_distance(spec, y, z, n, w).to_rational();
            if (dxy != dyx || dxz > dxy + dyz + slack) axioms_ok = false;
        }
    }
    s.check("metric-axioms", axioms_ok, "symmetry or triangle inequality broke on a sampled triple");
}

}  // namespace

CheckReport run_checks(const std::string& suite, const ConjugacySpec* conjugacy_override) {
    CheckReport rep;
    bool known = false;
    if (suite == "dyadic" || suite == "all") suite_dyadic(rep), known = true;
    if (suite == "discretize" || suite == "all") suite_discretize(rep), known = true;
    if (suite == "neighborhood" || suite == "all") suite_neighborhood(rep), known = true;
    if (suite == "solvers" || suite == "all") suite_solvers(rep), known = true;
    if (suite == "reductions" || suite == "all") suite_reductions(rep, conjugacy_override), known = true;
    if (suite == "entropy" || suite == "all") suite_entropy(rep), known = true;
    if (!known)
        throw usage_error("unknown suite " + suite +
                          " (expected dyadic|discretize|neighborhood|solvers|reductions|entropy|all)");
    return rep;
}

}  // namespace telic
