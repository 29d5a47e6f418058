#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "telic/discretize.hpp"
#include "telic/entropy.hpp"
#include "telic/errors.hpp"
#include "telic/harness.hpp"
#include "telic/reductions.hpp"
#include "telic/solvers.hpp"

namespace {

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw telic::usage_error("cannot open output file " + out_path);
    file << text;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace telic;

    CLI::App app{"discretized orbits, telic decision problems, reductions, and entropy estimates"};
    app.require_subcommand(1);

    ResourceLimits limits;
    std::string out_path;
    app.add_option("--max-bits", limits.max_bits, "mantissa bit budget")->capture_default_str();
    app.add_option("--max-precision", limits.max_precision, "working precision cap")
        ->capture_default_str();
    app.add_option("--timeout-ms", limits.timeout_ms, "wall clock budget, 0 = none")
        ->capture_default_str();
    app.add_option("--out", out_path, "write results here instead of stdout");

    auto* it_cmd = app.add_subcommand("iterate", "run a discretized orbit and print the trace");
    std::string it_system, it_start;
    unsigned it_k = 1, it_r = 0;
    it_cmd->add_option("--system", it_system, "system file or inline JSON")->required();
    it_cmd->add_option("--start", it_start, "grid point \"(m_1,...,m_d)@r\"")->required();
    it_cmd->add_option("--k", it_k, "orbit length")->required();
    it_cmd->add_option("--r", it_r, "output grid precision")->required();
    it_cmd->callback([&] {
        SystemSpec spec = load_system(it_system);
        OrbitResult res = discretize_orbit(spec, {parse_grid_point(it_start), it_k, it_r}, limits);
        std::ostringstream os;
        os << "{\n  \"point\": \"" << res.point.to_string() << "\",\n  \"trace\": {"
           << "\"exact\": " << (res.trace.exact ? "true" : "false") << ", \"w\": " << res.trace.w
           << ", \"steps\": " << res.trace.steps << ", \"certified_error\": \""
           << res.trace.certified_error.to_string() << "\", \"boundary_ambiguous\": "
           << (res.trace.boundary_ambiguous ? "true" : "false") << "}\n}\n";
        emit(out_path, os.str());
    });

    auto* de_cmd = app.add_subcommand("decide", "answer the n-th telic decision problem");
    std::string de_instance, de_solver = "auto";
    unsigned de_n = 1;
    de_cmd->add_option("--instance", de_instance, "instance file")->required();
    de_cmd->add_option("--n", de_n, "problem index")->required();
    de_cmd->add_option("--solver", de_solver, "brute | pullback | auto")->capture_default_str();
    de_cmd->callback([&] {
        TelicInstance inst = load_instance(de_instance);
        Decision dec = decide(inst, de_n, de_solver, limits);
        emit(out_path, dec.yes ? "YES witness=" + dec.witness->to_string() + "\n" : "NO\n");
    });

    auto* re_cmd = app.add_subcommand("reduce", "conjugate or shift an instance");
    std::string re_instance, re_conjugacy;
    long re_shift = 0;
    bool re_shift_set = false;
    re_cmd->add_option("--instance", re_instance, "instance file")->required();
    re_cmd->add_option("--conjugacy", re_conjugacy, "conjugacy file");
    re_cmd->add_option("--shift", re_shift, "orbit shift power l")
        ->each([&](const std::string&) { re_shift_set = true; });
    re_cmd->callback([&] {
        if (re_conjugacy.empty() == !re_shift_set)
            throw usage_error("reduce needs exactly one of --conjugacy and --shift");
        TelicInstance inst = load_instance(re_instance);
        TelicInstance out = re_shift_set ? shift_instance(inst, re_shift)
                                         : conjugate_instance(inst, load_conjugacy(re_conjugacy));
        emit(out_path, instance_to_json(out));
    });

    auto* cr_cmd = app.add_subcommand("check-reduction", "replay two instances side by side");
    std::string cr_a, cr_b;
    unsigned cr_n_max = 6;
    cr_cmd->add_option("--a", cr_a, "first instance file")->required();
    cr_cmd->add_option("--b", cr_b, "second instance file")->required();
    cr_cmd->add_option("--n-max", cr_n_max, "largest n to replay")->capture_default_str();
    cr_cmd->callback([&] {
        ReductionReport rep = check_reduction(load_instance(cr_a), load_instance(cr_b), cr_n_max, limits);
        std::ostringstream os;
        write_reduction_csv(os, rep);
        emit(out_path, os.str());
        if (!rep.note.empty()) std::cerr << rep.note << "\n";
    });

    auto* en_cmd = app.add_subcommand("entropy", "greedy separated-set growth estimate");
    std::string en_system, en_eps, en_range;
    unsigned en_r = 8;
    en_cmd->add_option("--system", en_system, "system file or inline JSON")->required();
    en_cmd->add_option("--eps", en_eps, "separation threshold, e.g. 2^-4")->required();
    en_cmd->add_option("--n", en_range, "range \"lo..hi\" or a single n")->required();
    en_cmd->add_option("--r", en_r, "seed grid precision")->capture_default_str();
    en_cmd->callback([&] {
        auto [n_lo, n_hi] = parse_n_range(en_range);
        auto series = entropy_estimate(load_system(en_system), n_lo, n_hi, parse_eps(en_eps), en_r, limits);
        std::ostringstream os;
        write_entropy_csv(os, series);
        emit(out_path, os.str());
    });

    auto* be_cmd = app.add_subcommand("bench", "run solvers over an n range and emit counters");
    std::string be_instance, be_range;
    std::vector<std::string> be_solvers;
    be_cmd->add_option("--instance", be_instance, "instance file")->required();
    be_cmd->add_option("--n", be_range, "range \"lo..hi\" or a single n")->required();
    be_cmd->add_option("--solver", be_solvers, "solver name, repeatable (default: brute auto)");
    be_cmd->callback([&] {
        ExperimentPlan plan;
        std::tie(plan.n_lo, plan.n_hi) = parse_n_range(be_range);
        plan.solvers = be_solvers.empty() ? std::vector<std::string>{"brute", "auto"} : be_solvers;
        plan.limits = limits;
        auto records = run_bench(load_instance(be_instance), plan);
        std::ostringstream os;
        write_bench_csv(os, records);
        emit(out_path, os.str());
    });

    auto* ck_cmd = app.add_subcommand("check", "run a self-check suite");
    std::string ck_suite, ck_conjugacy;
    ck_cmd->add_option("--suite", ck_suite,
                       "dyadic | discretize | neighborhood | solvers | reductions | entropy | all")
        ->required();
    ck_cmd->add_option("--conjugacy", ck_conjugacy, "replay this conjugacy in the reductions suite");
    bool ck_failed = false;
    ck_cmd->callback([&] {
        ConjugacySpec phi;
        const ConjugacySpec* override_phi = nullptr;
        if (!ck_conjugacy.empty()) {
            phi = load_conjugacy(ck_conjugacy);
            override_phi = &phi;
        }
        CheckReport rep = run_checks(ck_suite, override_phi);
        std::ostringstream os;
        for (const auto& line : rep.lines) os << line << "\n";
        os << "suite " << ck_suite << ": " << rep.lines.size() << " checks, "
           << (rep.passed ? "all passed" : "FAILURES above") << "\n";
        emit(out_path, os.str());
        ck_failed = !rep.passed;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return ck_failed ? 70 : 0;
}
