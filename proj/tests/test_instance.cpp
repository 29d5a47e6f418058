#include <doctest.h>

#include "telic/instance.hpp"
#include "telic/solvers.hpp"

using namespace telic;

namespace {

GridPoint gp(long m, unsigned r) { return GridPoint({BigInt(m)}, r); }

TelicInstance make_instance(const SystemSpec& sys, const EndpointExpr& lo, const EndpointExpr& hi,
                            long C = 1) {
    TelicInstance inst;
    inst.system = sys;
    inst.base_system = sys;
    inst.base_space = sys.space;
    inst.targets.rect = {{lo, hi}};
    inst.C = C;
    inst.id = "fixture";
    inst.validate();
    return inst;
}

EndpointExpr ep(const Rational& v) { return EndpointExpr::constant(v); }

}  // namespace

TEST_CASE("endpoint templates evaluate c + k*2^-n") {
    EndpointExpr e = EndpointExpr::parse("1/2 + 2^-n");
    CHECK(e.eval(3) == Rational(5, 8));
    CHECK(e.eval(1) == Rational(1));
    EndpointExpr f = EndpointExpr::parse("3/4 - 2^-n - 2^-n");
    CHECK(f.eval(2) == Rational(1, 4));
    CHECK(EndpointExpr::parse(e.to_string()) == e);
    CHECK(EndpointExpr::parse("7").eval(5) == Rational(7));
    CHECK_THROWS_AS(EndpointExpr::parse("2^-n * 3"), data_error);
}

TEST_CASE("seed schedules: identity and affine at n, square at 2n") {
    SeedFamily id;
    CHECK(id.r_of(3) == 3);
    SeedFamily sq;
    sq.kind = SeedKind::Square;
    CHECK(sq.r_of(2) == 4);
    sq.r_widen = 5;
    CHECK(sq.r_of(2) == 9);
}

TEST_CASE("seed_eval pushes seeds through the family") {
    TelicInstance rot = make_instance(SystemSpec::rotation(Rational(1, 4)), ep(0), ep(Rational(1, 8)));
    CHECK(seed_eval(rot, 3, gp(5, 3)).value() == gp(5, 3));  // identity

    TelicInstance sq = make_instance(SystemSpec::tent(), ep(0), ep(Rational(1, 4)));
    sq.seeds.kind = SeedKind::Square;
    CHECK(seed_eval(sq, 2, gp(2, 2)).value() == gp(4, 4));  // (1/2)^2 = 1/4 at r=4

    TelicInstance aff = make_instance(SystemSpec::tent(), ep(0), ep(Rational(1, 4)));
    aff.seeds.kind = SeedKind::Affine;
    aff.seeds.a = {Rational(1, 4)};
    aff.seeds.b = {Rational(1, 4)};
    CHECK(seed_eval(aff, 2, gp(4, 2)).value() == gp(2, 2));  // embeds 1 at 1/2
}

TEST_CASE("table seeds pass bottoms through") {
    TelicInstance t = make_instance(SystemSpec::tent(), ep(0), ep(Rational(1, 4)));
    t.seeds.kind = SeedKind::Table;
    t.seeds.table_n = 1;
    t.seeds.table_r = 2;
    t.seeds.table = {gp(3, 2), std::nullopt, gp(1, 2)};
    CHECK(seed_eval(t, 1, gp(0, 1)).value() == gp(3, 2));
    CHECK(!seed_eval(t, 1, gp(1, 1)).has_value());
    CHECK(seed_eval(t, 1, gp(2, 1)).value() == gp(1, 2));
}

TEST_CASE("target membership at half-grid tolerance with the rounding tie rule") {
    TelicInstance inst =
        make_instance(SystemSpec::rotation(Rational(1, 4)), ep(Rational(1, 2)), ep(Rational(3, 4)));
    CHECK(target_member(inst, 2, gp(2, 2)));   // 1/2 inside
    CHECK(!target_member(inst, 2, gp(1, 2)));  // 1/4 a full grid step away

    // point target 5/16: equidistant grid values 1/4 and 3/8; the tie rule
    // keeps only 1/4 in the discretized target
    TelicInstance point =
        make_instance(SystemSpec::rotation(Rational(1, 4)), ep(Rational(5, 16)), ep(Rational(5, 16)));
    CHECK(target_member(point, 3, gp(2, 3)));
    CHECK(!target_member(point, 3, gp(3, 3)));
}

TEST_CASE("axis hulls carry the wrap and the full-cover flag") {
    SpaceAxis c = SpaceAxis::circle();
    auto h = target_axis_hull(c, Rational(5, 16), Rational(5, 16), 3);
    REQUIRE(h.has_value());
    CHECK(h->lo == 2);
    CHECK(h->hi == 2);
    CHECK(!h->full);

    auto wrap = target_axis_hull(c, Rational(7, 8), Rational(1), 3);
    REQUIRE(wrap.has_value());
    CHECK(wrap->hi == 8);  // reaches the lifted 1 === 0

    auto all = target_axis_hull(c, Rational(0), Rational(1), 3);
    REQUIRE(all.has_value());
    CHECK(all->full);

    SpaceAxis iv = SpaceAxis::interval(0, 1);
    auto miss = target_axis_hull(iv, Rational(-3), Rational(-2), 3);
    CHECK(!miss.has_value());
}

TEST_CASE("rect union distances are exact square roots of rationals") {
    RectUnion u;
    u.space = SpaceSpec::unit_interval();
    u.rects = {{{Rational(1, 2), Rational(3, 4)}}};
    auto d = rect_union_distance(u, {Rational(0)}, 2);
    REQUIRE(d.has_value());
    CHECK(d->inner == Rational(1, 4));  // distance 1/2 to the nearest grid value

    RectUnion u2;
    u2.space = SpaceSpec{{SpaceAxis::interval(0, 1), SpaceAxis::interval(0, 1)}};
    u2.rects = {{{Rational(1, 2), Rational(3, 4)}, {Rational(1, 2), Rational(3, 4)}}};
    auto d2v = rect_union_distance(u2, {Rational(0), Rational(0)}, 2);
    REQUIRE(d2v.has_value());
    CHECK(d2v->inner == Rational(1, 2));  // corner: sqrt(1/4 + 1/4)

    RectUnion u3;
    u3.space = SpaceSpec::unit_interval();
    u3.rects = {{{Rational(1, 2), Rational(3, 4)}}, {{Rational(0), Rational(1, 16)}}};
    auto d3 = rect_union_distance(u3, {Rational(1, 4)}, 4);
    REQUIRE(d3.has_value());
    CHECK(d3->inner == Rational(9, 256));  // min(1/4, 3/16) = 3/16

    RectUnion empty;
    empty.space = SpaceSpec::unit_interval();
    CHECK(!rect_union_distance(empty, {Rational(1, 4)}, 4).has_value());
}

TEST_CASE("grid membership equals the half-grid distance test on grid inputs") {
    RectUnion u;
    u.space = SpaceSpec::unit_circle();
    u.rects = {{{Rational(3, 16), Rational(5, 12)}}};
    for (unsigned r = 1; r <= 7; ++r) {
        for (BigInt m = 0; m < pow2(r); ++m) {
            std::vector<Rational> x{Rational(m, pow2(r))};
            bool member = rect_union_member(u, x, r);
            auto dist = rect_union_distance(u, x, r);
            bool close = dist.has_value() &&
                         dist->compare_to_rational(Rational(1, pow2(r + 1))) != std::strong_ordering::greater;
            CHECK(member == close);
        }
    }
}

TEST_CASE("neighborhood preservation holds for the closed-form kinds") {
    SeedFamily id;
    CHECK(check_neighborhood_preservation(id, 10).ok);

    SeedFamily sq;
    sq.kind = SeedKind::Square;
    NeighborhoodReport rep = check_neighborhood_preservation(sq, 8);
    CHECK(rep.ok);
    CHECK(rep.delta > 0);

    SeedFamily aff;
    aff.kind = SeedKind::Affine;
    aff.d = 2;
    aff.a = {Rational(1, 2), Rational(-1, 2)};
    aff.b = {Rational(1, 4), Rational(3, 4)};
    CHECK(check_neighborhood_preservation(aff, 4).ok);
}

TEST_CASE("neighborhood preservation flags a scrambled table") {
    SeedFamily t;
    t.kind = SeedKind::Table;
    t.table_n = 1;
    t.table_r = 2;
    t.table = {GridPoint({BigInt(3)}, 2), GridPoint({BigInt(0)}, 2), GridPoint({BigInt(1)}, 2)};
    NeighborhoodReport rep = check_neighborhood_preservation(t, 1);
    CHECK(!rep.ok);
    CHECK(rep.violation.has_value());
}

TEST_CASE("instance validation names violated invariants") {
    TelicInstance inst;
    inst.system = SystemSpec::rotation(Rational(1, 4));
    inst.base_system = inst.system;
    inst.base_space = inst.system.space;
    inst.targets.rect = {{ep(0), ep(Rational(1, 8))}};
    inst.C = 0;
    CHECK_THROWS_AS(inst.validate(), data_error);

    TelicInstance gap;
    gap.system = SystemSpec::tent();
    gap.base_system = gap.system;
    gap.base_space = gap.system.space;
    gap.targets.rect = {{ep(Rational(3)), ep(Rational(4))}};  // misses [0,1]
    CHECK_THROWS_AS(gap.validate(), data_error);
}

TEST_CASE("doubling the precision multiplier keeps robust yes-instances yes") {
    // witness orbit endpoint 0 sits strictly inside [0, 1/4]
    TelicInstance c1 = make_instance(SystemSpec::rotation(Rational(1, 4)), ep(0), ep(Rational(1, 4)));
    TelicInstance c2 = make_instance(SystemSpec::rotation(Rational(1, 4)), ep(0), ep(Rational(1, 4)), 2);
    for (unsigned n = 1; n <= 6; ++n) {
        bool y1 = false, y2 = false;
        for (BigInt m = 0; m <= pow2(n); ++m) {
            GridPoint s({m}, n);
            if (verify_certificate(c1, n, s)) y1 = true;
            if (verify_certificate(c2, n, s)) y2 = true;
        }
        CHECK(y1);
        CHECK(y1 == y2);
    }
}

TEST_CASE("seed_image_value tracks seed_eval on grid seeds") {
    TelicInstance sq = make_instance(SystemSpec::tent(), ep(0), ep(Rational(1, 4)));
    sq.seeds.kind = SeedKind::Square;
    for (unsigned n = 1; n <= 5; ++n) {
        for (BigInt m = 0; m <= pow2(n); ++m) {
            auto via_eval = seed_eval(sq, n, GridPoint({m}, n));
            auto via_value = seed_image_value(sq, n, Rational(m, pow2(n)));
            REQUIRE(via_eval.has_value());
            REQUIRE(via_value.has_value());
            CHECK(via_eval->values()[0] == *via_value);
        }
    }
}
