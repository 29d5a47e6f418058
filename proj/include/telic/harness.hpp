#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "telic/entropy.hpp"
#include "telic/instance.hpp"
#include "telic/reductions.hpp"
#include "telic/solvers.hpp"

namespace telic {

// Instance files are JSON:
//   {"system": {"kind": "rotation", "alpha": "1/4"},
//    "seeds": {"kind": "identity", "d": 1},
//    "targets": {"rect": [["0", "1/8"]], "ell": 0},
//    "H": "identity", "C": 1}
// Endpoint strings follow the micro-grammar of EndpointExpr: sums and
// differences of rationals and the literal 2^-n. Conjugated or shifted
// instances additionally carry base_system / base_space / seed stages, all of
// which round-trip.
TelicInstance instance_from_json(const std::string& text);
std::string instance_to_json(const TelicInstance& inst);
TelicInstance load_instance(const std::string& path);

SystemSpec system_from_json(const std::string& text);
std::string system_to_json(const SystemSpec& spec);
// Reads a file path, or parses the argument itself when it starts with '{'.
SystemSpec load_system(const std::string& path_or_inline);

ConjugacySpec conjugacy_from_json(const std::string& text);
std::string conjugacy_to_json(const ConjugacySpec& phi);
ConjugacySpec load_conjugacy(const std::string& path);

// "(m_1,...,m_d)@r"
GridPoint parse_grid_point(const std::string& s);

// Tolerances: "2^-4", dyadic "m/2^q", or a plain integer.
Dyadic parse_eps(const std::string& s);

// "2..10" or a single "7". lo may exceed hi; iteration is then empty.
std::pair<unsigned, unsigned> parse_n_range(const std::string& s);

struct ExperimentPlan {
    unsigned n_lo = 1, n_hi = 0;  // inclusive; empty when n_lo > n_hi
    std::vector<std::string> solvers;
    ResourceLimits limits;
};

struct BenchRecord {
    std::string instance_id;
    unsigned n = 0;
    std::string solver;
    bool yes = false;
    std::optional<GridPoint> witness;
    OpCounters counters;
    unsigned w = 0;  // orbit working precision at this n
    double wall_ms = 0.0;
};

// Decides every (n, solver) cell, recording answers and counters. Solvers
// disagreeing on an answer for the same n abort with internal_error and a
// diagnostic dump; counters are the unit of runtime for assertions, wall time
// is informational only.
std::vector<BenchRecord> run_bench(const TelicInstance& inst, const ExperimentPlan& plan);

// CSV emitters. Columns are frozen for diff-based regression tests; timing
// stays in the last column so determinism checks can strip it.
void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records);
void write_entropy_csv(std::ostream& os, const std::vector<SeparatedSetReport>& series);
void write_reduction_csv(std::ostream& os, const ReductionReport& rep);

struct CheckReport {
    bool passed = true;
    std::vector<std::string> lines;
};

// suite: dyadic | discretize | neighborhood | solvers | reductions | entropy
// | all. Unknown names raise usage_error. The reductions suite validates and
// replays the supplied conjugacy instead of the built-in catalog when one is
// given.
CheckReport run_checks(const std::string& suite, const ConjugacySpec* conjugacy_override = nullptr);

}  // namespace telic
