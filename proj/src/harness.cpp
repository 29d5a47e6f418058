#include "telic/harness.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "telic/errors.hpp"

namespace telic {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw data_error(std::string("json parse error: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Rational rational_field(const json& v, const std::string& where) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw data_error(where + ": expected a rational string or integer");
}

Dyadic dyadic_field(const json& v, const std::string& where) {
    Rational r = rational_field(v, where);
    auto d = Dyadic::from_rational_exact(r);
    if (!d) throw data_error(where + ": value must be dyadic (m/2^q)");
    return *d;
}

BigInt bigint_field(const json& v, const std::string& where) {
    if (v.is_string()) return BigInt(v.get<std::string>());
    if (v.is_number_integer()) return BigInt(v.get<long long>());
    throw data_error(where + ": expected an integer or integer string");
}

QuadIrr quad_field(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 4)
        throw data_error(where + ": quad takes [a, b, c, D]");
    return QuadIrr(bigint_field(v[0], where), bigint_field(v[1], where), bigint_field(v[2], where),
                   bigint_field(v[3], where));
}

json axis_to_json(const SpaceAxis& axis) {
    if (axis.kind == SpaceAxis::Kind::Circle) return json{{"kind", "circle"}};
    return json{{"kind", "interval"}, {"lo", axis.lo.to_string()}, {"hi", axis.hi.to_string()}};
}

SpaceAxis axis_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle") return SpaceAxis::circle();
    if (kind == "interval")
        return SpaceAxis::interval(dyadic_field(j.at("lo"), "axis.lo"), dyadic_field(j.at("hi"), "axis.hi"));
    throw data_error("axis.kind: expected circle or interval, got " + kind);
}

json space_to_json(const SpaceSpec& space) {
    json axes = json::array();
    for (const auto& a : space.axes) axes.push_back(axis_to_json(a));
    return json{{"axes", axes}};
}

SpaceSpec space_from_json(const json& j) {
    SpaceSpec s;
    for (const auto& a : j.at("axes")) s.axes.push_back(axis_from_json(a));
    return s;
}

bool axis_equal(const SpaceAxis& a, const SpaceAxis& b) {
    return a.kind == b.kind && a.lo == b.lo && a.hi == b.hi;
}

bool space_equal(const SpaceSpec& a, const SpaceSpec& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (!axis_equal(a.axes[i], b.axes[i])) return false;
    return true;
}

SystemSpec system_from(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "doubling") return SystemSpec::doubling();
    if (kind == "tent") return SystemSpec::tent();
    if (kind == "logistic") return SystemSpec::logistic(rational_field(j.at("lambda"), "system.lambda"));
    if (kind == "rotation") {
        const json& a = j.at("alpha");
        if (a.is_object() && a.contains("quad"))
            return SystemSpec::rotation(quad_field(a.at("quad"), "system.alpha.quad"));
        return SystemSpec::rotation(rational_field(a, "system.alpha"));
    }
    if (kind == "affine_quadratic")
        return SystemSpec::affine_quadratic(rational_field(j.at("c"), "system.c"),
                                            dyadic_field(j.at("lo"), "system.lo"),
                                            dyadic_field(j.at("hi"), "system.hi"));
    throw data_error("system.kind: unknown kind " + kind);
}

json system_to(const SystemSpec& spec) {
    switch (spec.kind) {
        case SystemKind::Doubling:
            return json{{"kind", "doubling"}};
        case SystemKind::Tent:
            return json{{"kind", "tent"}};
        case SystemKind::Logistic:
            return json{{"kind", "logistic"}, {"lambda", rational_to_string(spec.lambda)}};
        case SystemKind::Rotation:
            if (spec.rotation_is_rational())
                return json{{"kind", "rotation"},
                            {"alpha", rational_to_string(std::get<Rational>(spec.alpha))}};
            else {
                const QuadIrr& q = std::get<QuadIrr>(spec.alpha);
                return json{{"kind", "rotation"},
                            {"alpha",
                             json{{"quad", json::array({q.a().str(), q.b().str(), q.c().str(),
                                                        q.D().str()})}}}};
            }
        case SystemKind::AffineQuadratic:
            return json{{"kind", "affine_quadratic"},
                        {"c", rational_to_string(spec.qc)},
                        {"lo", spec.space.axes[0].lo.to_string()},
                        {"hi", spec.space.axes[0].hi.to_string()}};
    }
    throw internal_error("unknown system kind");
}

json stage_to_json(const ExactMap1D& stage) {
    json j;
    switch (stage.kind) {
        case ExactMap1D::Kind::Rotate:
            j["kind"] = "rotate";
            if (stage.rot_irr)
                j["rot"] = json{{"quad", json::array({stage.rot_irr->a().str(), stage.rot_irr->b().str(),
                                                      stage.rot_irr->c().str(), stage.rot_irr->D().str()})}};
            else
                j["rot"] = rational_to_string(stage.rot);
            break;
        case ExactMap1D::Kind::Affine:
            j["kind"] = "affine";
            j["a"] = rational_to_string(stage.a);
            j["b"] = rational_to_string(stage.b);
            break;
        case ExactMap1D::Kind::HalfAngle:
            j["kind"] = "half-angle";
            break;
        case ExactMap1D::Kind::HalfAngleInverse:
            j["kind"] = "half-angle-inverse";
            break;
    }
    j["axis"] = axis_to_json(stage.out_axis);
    return j;
}

ExactMap1D stage_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    SpaceAxis axis = j.contains("axis") ? axis_from_json(j.at("axis")) : SpaceAxis::circle();
    if (kind == "rotate") {
        const json& rot = j.at("rot");
        if (rot.is_object() && rot.contains("quad"))
            return ExactMap1D::rotate_irr(quad_field(rot.at("quad"), "stage.rot.quad"), axis);
        return ExactMap1D::rotate(rational_field(rot, "stage.rot"), axis);
    }
    if (kind == "affine")
        return ExactMap1D::affine_map(rational_field(j.at("a"), "stage.a"),
                                      rational_field(j.at("b"), "stage.b"), axis);
    if (kind == "half-angle") return ExactMap1D::half_angle(axis);
    if (kind == "half-angle-inverse") return ExactMap1D::half_angle_inverse(axis);
    throw data_error("stage.kind: unknown kind " + kind);
}

SeedKind seed_kind_from(const std::string& s) {
    if (s == "identity") return SeedKind::Identity;
    if (s == "affine") return SeedKind::Affine;
    if (s == "square") return SeedKind::Square;
    if (s == "table") return SeedKind::Table;
    throw data_error("seeds.kind: unknown kind " + s);
}

std::string seed_kind_to(SeedKind k) {
    switch (k) {
        case SeedKind::Identity: return "identity";
        case SeedKind::Affine: return "affine";
        case SeedKind::Square: return "square";
        case SeedKind::Table: return "table";
    }
    throw internal_error("unknown seed kind");
}

}  // namespace

GridPoint parse_grid_point(const std::string& s) {
    auto at = s.rfind('@');
    if (s.empty() || s.front() != '(' || at == std::string::npos || at < 2 || s[at - 1] != ')')
        throw data_error("grid point must look like (m_1,...,m_d)@r: " + s);
    GridPoint p;
    try {
        p.r = unsigned(std::stoul(s.substr(at + 1)));
        std::istringstream body(s.substr(1, at - 2));
        std::string coord;
        while (std::getline(body, coord, ',')) p.coords.push_back(BigInt(coord));
    } catch (const std::exception&) {
        throw data_error("grid point must look like (m_1,...,m_d)@r: " + s);
    }
    if (p.coords.empty()) throw data_error("grid point needs at least one coordinate: " + s);
    return p;
}

TelicInstance instance_from_json(const std::string& text) {
    json j = parse_json(text);
    TelicInstance inst;
    inst.system = system_from(j.at("system"));
    inst.base_system = j.contains("base_system") ? system_from(j.at("base_system")) : inst.system;
    inst.base_space = j.contains("base_space") ? space_from_json(j.at("base_space")) : inst.base_system.space;

    const json& seeds = j.at("seeds");
    inst.seeds.kind = seed_kind_from(seeds.at("kind").get<std::string>());
    inst.seeds.d = seeds.value("d", 1u);
    if (seeds.contains("a"))
        for (const auto& v : seeds.at("a")) inst.seeds.a.push_back(rational_field(v, "seeds.a"));
    if (seeds.contains("b"))
        for (const auto& v : seeds.at("b")) inst.seeds.b.push_back(rational_field(v, "seeds.b"));
    if (inst.seeds.kind == SeedKind::Table) {
        inst.seeds.table_n = seeds.at("n").get<unsigned>();
        inst.seeds.table_r = seeds.at("r").get<unsigned>();
        for (const auto& v : seeds.at("table")) {
            if (v.is_null())
                inst.seeds.table.push_back(std::nullopt);
            else
                inst.seeds.table.push_back(parse_grid_point(v.get<std::string>()));
        }
    }
    inst.seeds.r_widen = seeds.value("r_widen", 0u);

    const json& targets = j.at("targets");
    for (const auto& pair : targets.at("rect")) {
        if (!pair.is_array() || pair.size() != 2)
            throw data_error("targets.rect: each axis takes [lo, hi]");
        inst.targets.rect.push_back(
            {EndpointExpr::parse(pair[0].get<std::string>()), EndpointExpr::parse(pair[1].get<std::string>())});
    }
    inst.targets.ell = targets.value("ell", 0);
    if (j.contains("H")) {
        std::string h = j.at("H").get<std::string>();
        std::string expect = inst.targets.ell == 0 ? "identity" : "T^" + std::to_string(inst.targets.ell);
        if (h != expect)
            throw data_error("H is " + h + " but targets.ell says " + expect);
    }

    if (!j.contains("C")) throw data_error("C must be a positive integer");
    inst.C = j.at("C").get<long>();
    inst.id = j.value("id", std::string());
    if (j.contains("seed_post"))
        for (const auto& st : j.at("seed_post")) inst.seed_post.push_back(stage_from_json(st));
    if (j.contains("target_pullback"))
        for (const auto& st : j.at("target_pullback")) inst.target_pullback.push_back(stage_from_json(st));

    inst.validate();
    return inst;
}

std::string instance_to_json(const TelicInstance& inst) {
    json j;
    j["system"] = system_to(inst.system);
    if (inst.base_system.id() != inst.system.id()) j["base_system"] = system_to(inst.base_system);
    if (!space_equal(inst.base_space, inst.base_system.space))
        j["base_space"] = space_to_json(inst.base_space);

    json seeds;
    seeds["kind"] = seed_kind_to(inst.seeds.kind);
    seeds["d"] = inst.seeds.d;
    if (!inst.seeds.a.empty()) {
        json a = json::array(), b = json::array();
        for (const auto& v : inst.seeds.a) a.push_back(rational_to_string(v));
        for (const auto& v : inst.seeds.b) b.push_back(rational_to_string(v));
        seeds["a"] = a;
        seeds["b"] = b;
    }
    if (inst.seeds.kind == SeedKind::Table) {
        seeds["n"] = inst.seeds.table_n;
        seeds["r"] = inst.seeds.table_r;
        json table = json::array();
        for (const auto& entry : inst.seeds.table) {
            if (entry)
                table.push_back(entry->to_string());
            else
                table.push_back(nullptr);
        }
        seeds["table"] = table;
    }
    if (inst.seeds.r_widen) seeds["r_widen"] = inst.seeds.r_widen;
    j["seeds"] = seeds;

    json rect = json::array();
    for (const auto& pair : inst.targets.rect)
        rect.push_back(json::array({pair[0].to_string(), pair[1].to_string()}));
    j["targets"] = json{{"rect", rect}, {"ell", inst.targets.ell}};
    j["H"] = inst.targets.ell == 0 ? "identity" : "T^" + std::to_string(inst.targets.ell);
    j["C"] = inst.C;
    if (!inst.id.empty()) j["id"] = inst.id;
    if (!inst.seed_post.empty()) {
        json stages = json::array();
        for (const auto& st : inst.seed_post) stages.push_back(stage_to_json(st));
        j["seed_post"] = stages;
    }
    if (!inst.target_pullback.empty()) {
        json stages = json::array();
        for (const auto& st : inst.target_pullback) stages.push_back(stage_to_json(st));
        j["target_pullback"] = stages;
    }
    return j.dump(2) + "\n";
}

TelicInstance load_instance(const std::string& path) { return instance_from_json(read_file(path)); }

SystemSpec system_from_json(const std::string& text) {
    json j = parse_json(text);
    // instance files double as system files
    if (j.contains("system")) return system_from(j.at("system"));
    return system_from(j);
}

std::string system_to_json(const SystemSpec& spec) { return system_to(spec).dump(2) + "\n"; }

SystemSpec load_system(const std::string& path_or_inline) {
    if (!path_or_inline.empty() && path_or_inline.front() == '{')
        return system_from_json(path_or_inline);
    return system_from_json(read_file(path_or_inline));
}

ConjugacySpec conjugacy_from_json(const std::string& text) {
    json j = parse_json(text);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "affine") {
        ConjugacySpec phi = ConjugacySpec::affine(
            rational_field(j.at("a"), "conjugacy.a"), rational_field(j.at("b"), "conjugacy.b"),
            system_from(j.at("source")), system_from(j.at("target")), j.value("id", std::string()));
        phi.enabled = j.value("enabled", true);
        return phi;
    }
    if (kind == "half-angle") {
        ConjugacySpec phi = ConjugacySpec::tent_to_logistic();
        if (j.contains("source")) phi.source = system_from(j.at("source"));
        if (j.contains("target")) phi.target = system_from(j.at("target"));
        if (j.contains("id")) phi.id = j.at("id").get<std::string>();
        phi.enabled = j.value("enabled", false);
        return phi;
    }
    throw data_error("conjugacy.kind: expected affine or half-angle, got " + kind);
}

std::string conjugacy_to_json(const ConjugacySpec& phi) {
    json j;
    j["kind"] = phi.kind == ConjugacySpec::Kind::Affine ? "affine" : "half-angle";
    if (phi.kind == ConjugacySpec::Kind::Affine) {
        j["a"] = rational_to_string(phi.a);
        j["b"] = rational_to_string(phi.b);
    }
    j["source"] = system_to(phi.source);
    j["target"] = system_to(phi.target);
    if (!phi.id.empty()) j["id"] = phi.id;
    j["enabled"] = phi.enabled;
    return j.dump(2) + "\n";
}

ConjugacySpec load_conjugacy(const std::string& path) { return conjugacy_from_json(read_file(path)); }

Dyadic parse_eps(const std::string& s) {
    try {
        if (s.rfind("2^-", 0) == 0) return Dyadic(BigInt(1), unsigned(std::stoul(s.substr(3))));
        Rational r = parse_rational(s);
        if (auto d = Dyadic::from_rational_exact(r)) return *d;
    } catch (const std::exception&) {
    }
    throw usage_error("tolerance must be 2^-k, m/2^q, or an integer: " + s);
}

std::pair<unsigned, unsigned> parse_n_range(const std::string& s) {
    try {
        auto dots = s.find("..");
        if (dots == std::string::npos) {
            unsigned n = unsigned(std::stoul(s));
            return {n, n};
        }
        return {unsigned(std::stoul(s.substr(0, dots))), unsigned(std::stoul(s.substr(dots + 2)))};
    } catch (const std::exception&) {
        throw usage_error("n range must be lo..hi or a single integer: " + s);
    }
}

std::vector<BenchRecord> run_bench(const TelicInstance& inst, const ExperimentPlan& plan) {
    if (plan.solvers.empty()) throw usage_error("bench needs at least one solver");
    std::vector<BenchRecord> out;
    for (unsigned n = plan.n_lo; plan.n_lo <= plan.n_hi && n <= plan.n_hi; ++n) {
        std::size_t first_of_n = out.size();
        for (const std::string& solver : plan.solvers) {
            BenchRecord rec;
            rec.instance_id = inst.id.empty() ? "instance" : inst.id;
            rec.n = n;
            rec.solver = solver;
            rec.w = working_precision(inst.system.lipschitz(), n, inst.v_of(n));
            auto t0 = std::chrono::steady_clock::now();
            Decision dec = decide(inst, n, solver, plan.limits);
            auto t1 = std::chrono::steady_clock::now();
            rec.yes = dec.yes;
            rec.witness = dec.witness;
            rec.counters = dec.counters;
            rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            out.push_back(std::move(rec));
            if (out.back().yes != out[first_of_n].yes) {
                std::ostringstream dump;
                dump << "solver disagreement on " << out.back().instance_id << " at n=" << n << ": ";
                for (std::size_t i = first_of_n; i < out.size(); ++i)
                    dump << out[i].solver << "=" << (out[i].yes ? "YES" : "NO") << " ";
                throw internal_error(dump.str());
            }
        }
    }
    return out;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
    os << "instance,n,solver,answer,witness,seed_evals,orbit_calls,orbit_steps,membership_checks,w,"
          "wall_ms\n";
    for (const auto& rec : records) {
        os << rec.instance_id << "," << rec.n << "," << rec.solver << "," << (rec.yes ? "YES" : "NO")
           << "," << (rec.witness ? rec.witness->to_string() : "") << "," << rec.counters.seed_evals
           << "," << rec.counters.orbit_calls << "," << rec.counters.orbit_steps << ","
           << rec.counters.membership_checks << "," << rec.w << "," << rec.wall_ms << "\n";
    }
}

void write_entropy_csv(std::ostream& os, const std::vector<SeparatedSetReport>& series) {
    os << "n,count,ratio,slope_tail\n";
    bool first = true;
    for (const auto& rep : series) {
        os << rep.n << "," << rep.count << ",";
        if (!first) os << rep.ratio;
        os << "," << rep.slope_tail << "\n";
        first = false;
    }
}

void write_reduction_csv(std::ostream& os, const ReductionReport& rep) {
    os << "n,a,b,agree,witness_match\n";
    for (const auto& row : rep.rows)
        os << row.n << "," << (row.a_yes ? "YES" : "NO") << "," << (row.b_yes ? "YES" : "NO") << ","
           << (row.agree ? 1 : 0) << "," << (row.witness_match ? 1 : 0) << "\n";
}

}  // namespace telic
