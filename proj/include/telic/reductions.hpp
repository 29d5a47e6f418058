#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telic/discretize.hpp"
#include "telic/instance.hpp"

namespace telic {

// A conjugacy phi with phi o T = S o phi between the source system T and the
// target system S. Affine conjugacies are exact; the half-angle kind
// (sin^2(pi x / 2), tent -> logistic lambda=4) needs certified evaluation and
// must be enabled explicitly.
struct ConjugacySpec {
    enum class Kind { Affine, HalfAngle };
    Kind kind = Kind::Affine;
    Rational a = 1, b = 0;  // affine: phi(x) = a*x + b
    SystemSpec source, target;
    std::string id;
    bool enabled = true;  // half-angle specs start disabled

    FunctionSpec forward() const;
    FunctionSpec backward() const;
    ConjugacySpec inverse() const;  // affine kinds only

    static ConjugacySpec affine(const Rational& a, const Rational& b, SystemSpec source,
                                SystemSpec target, std::string id = "");
    static ConjugacySpec identity(const SystemSpec& sys);
    // phi(x) = 2 - 4x: logistic lambda=4 on [0,1] -> y^2 - 2 on [-2,2]
    static ConjugacySpec logistic_to_quadratic();
    // phi(x) = sin^2(pi x / 2): tent -> logistic lambda=4 (disabled by default)
    static ConjugacySpec tent_to_logistic();
};

struct ConjugacyReport {
    bool passed = false;
    std::uint64_t points_checked = 0;
    // sample point and a description of how the two sides differed
    std::vector<std::pair<Rational, std::string>> equation_violations;
    InversePairReport inverse_pair;
    std::string note;
};

// Checks the conjugacy equation on every source grid point at r = 10 (exactly
// for affine data, within a certified tolerance for the half-angle kind) and
// runs validate_inverse_pair for r <= 8. The half-angle inverse pair is held
// to a Holder-1/2 drift envelope instead of identity: the map is flat at the
// endpoints, so exact round trips there are impossible for any discretization
// and drifts up to ~2^(r/2) cells are the discretization floor.
ConjugacyReport validate_conjugacy(const ConjugacySpec& phi, const ResourceLimits& limits = {});

// Rebuilds inst over phi's target system: seed images gain a phi stage and
// membership pulls queries back through phi^-1 into the original rectangles.
// Performs only structural checks; run validate_conjugacy separately.
TelicInstance conjugate_instance(const TelicInstance& inst, const ConjugacySpec& phi);

// Shifts the instance along the orbit: seeds gain a T^-l stage, targets are
// pulled back by T^l. Requires an invertible system when l != 0.
TelicInstance shift_instance(const TelicInstance& inst, long l);

struct ReductionRow {
    unsigned n = 0;
    bool a_yes = false, b_yes = false;
    std::optional<GridPoint> a_witness, b_witness;
    bool agree = false;
    bool witness_match = false;  // same seed index (when both answer YES)
};

struct ReductionReport {
    bool passed = true;
    std::vector<ReductionRow> rows;
    std::string note;
};

// Brute-forces both instances for n = 1..n_max and compares answers and
// witness seed indices per n.
ReductionReport check_reduction(const TelicInstance& a, const TelicInstance& b, unsigned n_max,
                                const ResourceLimits& limits = {});

}  // namespace telic
