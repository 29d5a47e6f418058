#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "telic/discretize.hpp"
#include "telic/quadratic.hpp"

namespace telic {

// Exact value flowing through pullback chains: rational or quadratic irrational.
using ExactVal = std::variant<Rational, QuadIrr>;

ExactVal ev_add_rational(const ExactVal& v, const Rational& q);
ExactVal ev_affine(const Rational& a, const Rational& b, const ExactVal& v);
ExactVal ev_mod1(const ExactVal& v);
int ev_compare(const ExactVal& v, const Rational& q);  // sign of v - q
std::optional<Rational> ev_rational(const ExactVal& v);
std::string ev_to_string(const ExactVal& v);

// Target endpoint template: value(n) = c + k * 2^-n. Grammar: sums and
// differences of rational constants and the literal `2^-n`.
struct EndpointExpr {
    Rational c = 0;
    long k = 0;

    Rational eval(unsigned n) const;
    std::string to_string() const;
    static EndpointExpr parse(const std::string& s);
    static EndpointExpr constant(const Rational& v);
    bool operator==(const EndpointExpr&) const = default;
};

struct TargetFamily {
    std::vector<std::array<EndpointExpr, 2>> rect;  // per base axis: [lo(n), hi(n)]
    long ell = 0;                                   // wrapper power: H = T^ell
};

enum class SeedKind { Identity, Affine, Square, Table };

struct SeedFamily {
    SeedKind kind = SeedKind::Identity;
    unsigned d = 1;
    std::vector<Rational> a, b;  // affine per axis
    unsigned table_n = 0;        // table kind defines a single n
    unsigned table_r = 0;
    std::vector<std::optional<GridPoint>> table;  // lex by seed index; nullopt = bottom
    // extra image precision per n; non-exact conjugations widen the
    // images so the orbit's Lipschitz growth cannot swallow the stage error
    unsigned r_widen = 0;

    unsigned r_of(unsigned n) const;  // identity/affine: n, square: 2n, table: table_r
    bool closed_form() const { return kind != SeedKind::Table; }
};

// One post-composition stage; the seed pipeline rounds after each stage.
// Affine and Rotate apply exactly. The half-angle kinds (sin^2(pi x / 2) and
// its inverse) are evaluated adaptively by the pipeline instead of apply().
struct ExactMap1D {
    enum class Kind { Affine, Rotate, HalfAngle, HalfAngleInverse } kind = Kind::Rotate;
    Rational a = 1, b = 0;           // affine a*x + b
    Rational rot = 0;                // rotate: rational shift
    std::optional<QuadIrr> rot_irr;  //         or quadratic-irrational shift
    SpaceAxis out_axis = SpaceAxis::circle();  // axis the stage output lives on

    ExactVal apply(const ExactVal& v) const;  // exact; reduced mod 1 on circle axes
    bool exact() const { return kind == Kind::Affine || kind == Kind::Rotate; }
    static ExactMap1D rotate(const Rational& shift, SpaceAxis axis = SpaceAxis::circle());
    static ExactMap1D rotate_irr(const QuadIrr& shift, SpaceAxis axis = SpaceAxis::circle());
    static ExactMap1D affine_map(const Rational& a, const Rational& b, SpaceAxis out);
    static ExactMap1D half_angle(SpaceAxis out);
    static ExactMap1D half_angle_inverse(SpaceAxis out);
};

// A telic instance: does some precision-n seed, pushed through the seed
// pipeline and iterated n steps, land in the discretized target at precision
// v(n) = C*n?
struct TelicInstance {
    SystemSpec system;       // the system orbits run in
    SystemSpec base_system;  // system the wrapper refers to (differs after conjugation)
    SpaceSpec base_space;    // space of the base target rectangle
    SeedFamily seeds;
    TargetFamily targets;
    long C = 1;
    std::vector<ExactMap1D> seed_post;        // applied to seed images after H, rounded per stage
    std::vector<ExactMap1D> target_pullback;  // applied exactly to a membership query
    std::string id;

    unsigned v_of(unsigned n) const;
    void validate() const;  // throws data_error naming the violated invariant
};

struct OpCounters {
    std::uint64_t seed_evals = 0;
    std::uint64_t orbit_calls = 0;   // full discretized orbit evaluations
    std::uint64_t orbit_steps = 0;   // single map applications inside orbits
    std::uint64_t membership_checks = 0;
    std::uint64_t distance_evals = 0;
    void add(const OpCounters& o);
};

// Seed image h(s) at precision r_of(n): base family map, then H^ell, then the
// post stages, rounded at each stage. nullopt = bottom.
std::optional<GridPoint> seed_eval(const TelicInstance& inst, unsigned n, const GridPoint& s);

// Same pipeline applied to an arbitrary value in [0,1] (used on subcube
// representatives); closed-form one-dimensional families only.
std::optional<Rational> seed_image_value(const TelicInstance& inst, unsigned n, const Rational& s_value);

// Hull of D_v(R) on one axis, as lift indices lo <= hi. On a circle hi may
// reach 2^v when the upper endpoint rounds to the wrapped zero; full marks a
// rectangle covering every grid value. nullopt when R misses the axis.
struct AxisHull {
    BigInt lo, hi;
    bool full = false;
};
std::optional<AxisHull> target_axis_hull(const SpaceAxis& axis, const Rational& lo, const Rational& hi,
                                         unsigned v);

// Circle rounding on the lift: result in [0, 2^r], not reduced mod 2^r.
BigInt round_circle_lift(const Rational& y, unsigned r);
BigInt round_circle_lift_irr(const QuadIrr& y, unsigned r);

// x in D_{v(n)}(B^(n)): pulls the query back through the target chain and
// H^-ell exactly, then tests the base rectangle hull.
bool target_member(const TelicInstance& inst, unsigned n, const GridPoint& x, OpCounters* counters = nullptr);

// Union of axis-aligned rational rectangles in some space.
struct RectUnion {
    SpaceSpec space;
    std::vector<std::vector<std::array<Rational, 2>>> rects;  // rects[i][axis] = {lo, hi}
};

bool rect_union_member(const RectUnion& u, const std::vector<Rational>& value, unsigned r);

// Distance from value to the nearest grid point of D_r(rect), minimized over
// the union; nullopt = +infinity (empty union).
std::optional<SqrtRational> rect_union_distance(const RectUnion& u, const std::vector<Rational>& value,
                                                unsigned r);

struct NeighborhoodReport {
    bool ok = true;
    Rational delta;  // max image spread over adjacent seed pairs
    std::optional<std::pair<GridPoint, GridPoint>> violation;
    std::string note;
};

// Operational neighborhood preservation: along every axis line of I_n^d the
// non-bottom images are order-monotone, and delta reports the max adjacent
// spread. Caps enumeration at d*n <= 20.
NeighborhoodReport check_neighborhood_preservation(const SeedFamily& seeds, unsigned n);

// Raw family image g(s) with no wrapper or post stages, rounded at r_of(n) on
// the given axes (one value per axis). nullopt = bottom.
std::optional<std::vector<Rational>> seed_family_image(const SeedFamily& seeds, unsigned n,
                                                       const std::vector<Rational>& s_values,
                                                       const SpaceSpec& image_space);

}  // namespace telic
