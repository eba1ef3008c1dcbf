#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "pfext/parse.hpp"
#include "pfext/report.hpp"

namespace pfext {

// A problem file: the operator, an optional inhomogeneity, and optional
// overrides (base point, twist label, admissibility boundary, anchor jet,
// numeric settings, expected outcomes for corpus self-checks).
struct ProblemFile {
    std::string name;
    std::string operator_text;
    std::optional<std::string> inhomogeneity_text;
    std::optional<cdouble> base_point;
    std::optional<int> twist;
    std::optional<std::vector<cdouble>> boundary;
    std::optional<Eigen::VectorXcd> initial_jet;
    json config_overrides;  // null when absent
    std::string expect = "fuchsian";          // or "non-fuchsian"
    std::optional<std::string> expect_class;  // "trivial" | "nontrivial"
};

inline ProblemFile problem_from_json(const json& j) {
    ProblemFile p;
    if (!j.contains("operator")) throw ParseError("problem file has no \"operator\" entry");
    p.name = j.value("name", std::string("unnamed"));
    p.operator_text = j.at("operator").get<std::string>();
    if (j.contains("inhomogeneity")) p.inhomogeneity_text = j.at("inhomogeneity").get<std::string>();
    if (j.contains("base_point") && !j.at("base_point").is_string())
        p.base_point = complex_from_json(j.at("base_point"));
    if (j.contains("twist")) p.twist = j.at("twist").get<int>();
    if (j.contains("boundary")) {
        std::vector<cdouble> b;
        for (const auto& z : j.at("boundary")) b.push_back(complex_from_json(z));
        p.boundary = std::move(b);
    }
    if (j.contains("initial_jet")) {
        const auto& arr = j.at("initial_jet");
        Eigen::VectorXcd v(static_cast<int>(arr.size()));
        for (int i = 0; i < v.size(); ++i) v(i) = complex_from_json(arr[static_cast<std::size_t>(i)]);
        p.initial_jet = std::move(v);
    }
    if (j.contains("config")) p.config_overrides = j.at("config");
    p.expect = j.value("expect", std::string("fuchsian"));
    if (j.contains("expect_class")) p.expect_class = j.at("expect_class").get<std::string>();
    return p;
}

inline ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return problem_from_json(j);
}

inline NumericsConfig effective_config(const ProblemFile& p, const NumericsConfig& base) {
    if (p.config_overrides.is_null()) return base;
    return config_from_json(p.config_overrides, base);
}

inline json problem_echo(const ProblemFile& p) {
    json out{{"name", p.name}, {"operator", p.operator_text}};
    if (p.inhomogeneity_text) out["inhomogeneity"] = *p.inhomogeneity_text;
    if (p.base_point) out["base_point"] = to_json(*p.base_point);
    if (p.twist) out["twist"] = *p.twist;
    return out;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOutcome {
    DifferentialOperator op;
    SingularityProfile profile;
};

inline AnalyzeOutcome run_analyze(const ProblemFile& p, const NumericsConfig& cfg) {
    AnalyzeOutcome out;
    out.op = parse_operator(p.operator_text);
    out.profile = singularities(out.op, cfg.cluster_tol, cfg.gcd_tol);
    return out;
}

// ---------------------------------------------------------------- monodromy

struct MonodromyOutcome {
    SingularityProfile profile;
    LoopPlan plan;
    MonodromyRepresentation rep;
    ProductRelationReport relation;
    std::vector<LocalConsistencyEntry> consistency;
    AdmissibilityReport admissibility;
};

namespace detail {

inline std::vector<std::size_t> boundary_indices(const std::vector<cdouble>& plan_points,
                                                 const std::optional<std::vector<cdouble>>& requested,
                                                 const std::vector<bool>* from_operator) {
    std::vector<std::size_t> out;
    if (requested) {
        for (const auto& b : *requested) {
            bool found = false;
            for (std::size_t k = 0; k < plan_points.size(); ++k)
                if (std::abs(plan_points[k] - b) <= 1e-6 * std::max(1.0, std::abs(b))) {
                    out.push_back(k);
                    found = true;
                    break;
                }
            if (!found)
                throw Error("boundary point " + format_complex(b) + " is not among the planned singular points");
        }
        return out;
    }
    for (std::size_t k = 0; k < plan_points.size(); ++k)
        if (from_operator == nullptr || (*from_operator)[k]) out.push_back(k);
    return out;
}

inline std::vector<std::vector<cdouble>> plan_exponents(const SingularityProfile& prof,
                                                        const std::vector<cdouble>& plan_points) {
    std::vector<std::vector<cdouble>> out;
    for (const auto& z : plan_points) {
        const SingularPoint* sp = prof.at(z);
        if (sp == nullptr) throw Error("planned point is not in the singularity profile");
        out.push_back(sp->exponents);
    }
    return out;
}

}  // namespace detail

inline MonodromyOutcome run_monodromy(const ProblemFile& p, const NumericsConfig& cfg) {
    MonodromyOutcome out;
    DifferentialOperator op = parse_operator(p.operator_text);
    out.profile = require_fuchsian(op, cfg.cluster_tol);
    out.plan = generator_loops(out.profile.finite_locations(), out.profile.separation, p.base_point, cfg);
    const CompanionSystem sys = companion_system(out.profile.op, std::nullopt, cfg.cluster_tol);
    out.rep = monodromy_representation(sys, out.plan, cfg);
    out.relation = product_relation_check(sys, out.plan, out.rep, cfg);

    std::optional<std::vector<cdouble>> inf_exp;
    if (out.profile.infinity().is_regular) inf_exp = out.profile.infinity().exponents;
    out.consistency =
        local_consistency_check(out.rep, detail::plan_exponents(out.profile, out.plan.points), inf_exp, cfg);
    out.admissibility =
        admissibility_check(out.rep, detail::boundary_indices(out.plan.points, p.boundary, nullptr), cfg);
    return out;
}

// ---------------------------------------------------------------- extension

struct ExtensionOutcome {
    SingularityProfile profile;
    EnlargedProfile enlarged;
    LoopPlan plan;
    MonodromyRepresentation rep;
    ProductRelationReport relation;
    std::vector<LocalConsistencyEntry> consistency;
    AdmissibilityReport admissibility;

    DifferentialOperator d_ext;  // defined unless zero_inhomogeneity
    Cocycle route_continuation;
    BlockMonodromyReport route_block;
    bool zero_inhomogeneity = false;

    // route agreement
    std::vector<double> vector_distance;
    std::vector<double> combined_error;
    bool vectorwise_pass = true;
    ClassComparison class_comparison;

    ExtensionClass cls;  // from the continuation route
};

inline ExtensionOutcome run_extension(const ProblemFile& p, const NumericsConfig& cfg) {
    if (!p.inhomogeneity_text) throw ParseError("extension analysis needs an \"inhomogeneity\" entry");
    ExtensionOutcome out;
    InhomogeneousProblem prob;
    prob.op = parse_operator(p.operator_text);
    prob.g = parse_rational(*p.inhomogeneity_text);
    prob.twist = p.twist;
    out.profile = require_fuchsian(prob.op, cfg.cluster_tol);

    if (prob.g.is_zero()) {
        // Degenerate: the equation is homogeneous, the extension splits.
        out.zero_inhomogeneity = true;
        out.enlarged.op_profile = out.profile;
        out.enlarged.points = out.profile.finite_locations();
        out.enlarged.from_operator.assign(out.enlarged.points.size(), true);
        out.enlarged.exponents = detail::plan_exponents(out.profile, out.enlarged.points);
        out.enlarged.separation = out.profile.separation;
    } else {
        InhomogeneousProblem tmp = prob;
        out.enlarged = enlarged_profile(tmp, cfg);
    }

    out.plan = generator_loops(out.enlarged.points, out.enlarged.separation, p.base_point, cfg);
    const CompanionSystem sys = companion_system(out.profile.op, std::nullopt, cfg.cluster_tol);
    out.rep = monodromy_representation(sys, out.plan, cfg);
    out.relation = product_relation_check(sys, out.plan, out.rep, cfg);

    // exponents aligned with the plan's loop order
    std::vector<std::vector<cdouble>> exps;
    std::vector<bool> from_op_planned;
    for (const auto& z : out.plan.points) {
        bool matched = false;
        for (std::size_t k = 0; k < out.enlarged.points.size(); ++k)
            if (std::abs(out.enlarged.points[k] - z) <= 1e-12 * std::max(1.0, std::abs(z))) {
                exps.push_back(out.enlarged.exponents[k]);
                from_op_planned.push_back(out.enlarged.from_operator[k]);
                matched = true;
                break;
            }
        if (!matched) throw Error("plan point missing from the enlarged profile");
    }
    std::optional<std::vector<cdouble>> inf_exp;
    if (out.profile.infinity().is_regular) inf_exp = out.profile.infinity().exponents;
    out.consistency = local_consistency_check(out.rep, exps, inf_exp, cfg);
    out.admissibility =
        admissibility_check(out.rep, detail::boundary_indices(out.plan.points, p.boundary, &from_op_planned), cfg);

    const int n = out.rep.dim;
    if (out.zero_inhomogeneity) {
        out.route_continuation.dim = n;
        for (std::size_t j = 0; j < out.plan.loops.size(); ++j) {
            out.route_continuation.vectors.push_back(Eigen::VectorXcd::Zero(n));
            out.route_continuation.errors.push_back(0.0);
        }
        out.route_block.cocycle = out.route_continuation;
        for (std::size_t j = 0; j < out.plan.loops.size(); ++j) {
            Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(n + 1, n + 1);
            B.topLeftCorner(n, n) = out.rep.matrices[j];
            out.route_block.block_matrices.push_back(B);
            out.route_block.bottom_row_deviation.push_back(0.0);
            out.route_block.top_block_deviation.push_back(0.0);
        }
    } else {
        out.d_ext = extended_operator(prob);
        out.route_continuation = cocycle_by_continuation(prob, out.plan, out.rep, cfg, p.initial_jet);
        out.route_block = cocycle_by_block_monodromy(prob, out.plan, out.rep, cfg);
    }

    for (std::size_t j = 0; j < out.plan.loops.size(); ++j) {
        const double d = (out.route_continuation.vectors[j] - out.route_block.cocycle.vectors[j]).norm();
        const double combined = out.route_continuation.errors[j] + out.route_block.cocycle.errors[j] +
                                1e-12 * std::max(1.0, out.route_continuation.vectors[j].norm());
        out.vector_distance.push_back(d);
        out.combined_error.push_back(combined);
        out.vectorwise_pass = out.vectorwise_pass && d <= combined;
    }
    out.class_comparison = class_equal(out.rep, out.route_continuation, out.route_block.cocycle, cfg);
    out.cls = make_extension_class(out.rep, out.route_continuation, cfg, p.twist);
    return out;
}

// ---------------------------------------------------------------- reports

inline json base_report(const std::string& command, const ProblemFile& p, const NumericsConfig& cfg) {
    return json{{"engine", json{{"name", kEngineName}, {"version", kEngineVersion}}},
                {"command", command},
                {"problem", problem_echo(p)},
                {"config", config_to_json(cfg)},
                {"conventions", conventions_json()}};
}

inline json report_analyze(const ProblemFile& p, const NumericsConfig& cfg, const AnalyzeOutcome& out) {
    json rep = base_report("analyze", p, cfg);
    rep["analysis"] = to_json(out.profile);
    return rep;
}

inline json monodromy_section(const MonodromyRepresentation& rep, const ProductRelationReport& relation,
                              const std::vector<LocalConsistencyEntry>& consistency,
                              const AdmissibilityReport& admissibility) {
    json m = to_json(rep);
    m["product_relation_residual"] = relation.residual;
    m["product_relation_transfer_error"] = relation.transfer_error;
    m["local_consistency"] = to_json(consistency);
    m["admissibility"] = to_json(admissibility);
    return m;
}

inline json report_monodromy(const ProblemFile& p, const NumericsConfig& cfg, const MonodromyOutcome& out) {
    json rep = base_report("monodromy", p, cfg);
    rep["analysis"] = to_json(out.profile);
    rep["plan"] = to_json(out.plan);
    rep["monodromy"] = monodromy_section(out.rep, out.relation, out.consistency, out.admissibility);
    return rep;
}

inline json report_extension(const ProblemFile& p, const NumericsConfig& cfg, const ExtensionOutcome& out) {
    json rep = base_report("extension", p, cfg);
    rep["analysis"] = to_json(out.profile);

    json enl{{"separation", out.enlarged.separation}};
    json pts = json::array();
    for (std::size_t k = 0; k < out.enlarged.points.size(); ++k)
        pts.push_back(json{{"location", to_json(out.enlarged.points[k])},
                           {"from_operator", static_cast<bool>(out.enlarged.from_operator[k])}});
    enl["points"] = pts;
    rep["enlarged_locus"] = enl;

    rep["plan"] = to_json(out.plan);
    rep["monodromy"] = monodromy_section(out.rep, out.relation, out.consistency, out.admissibility);

    json ext;
    ext["zero_inhomogeneity"] = out.zero_inhomogeneity;
    if (!out.zero_inhomogeneity) ext["extended_operator"] = to_json(out.d_ext);
    ext["route_continuation"] = json{{"cocycle", to_json(out.route_continuation)}};
    json blocks = json::array();
    for (const auto& b : out.route_block.block_matrices) blocks.push_back(to_json(b));
    ext["route_block"] = json{{"cocycle", to_json(out.route_block.cocycle)},
                              {"block_matrices", blocks},
                              {"bottom_row_deviation", out.route_block.bottom_row_deviation},
                              {"top_block_deviation", out.route_block.top_block_deviation}};
    ext["route_agreement"] = json{{"vector_distance", out.vector_distance},
                                  {"combined_error", out.combined_error},
                                  {"vectorwise_pass", out.vectorwise_pass},
                                  {"class_equal", to_string(out.class_comparison.equal)},
                                  {"difference", to_json(out.class_comparison.difference)}};
    json cls{{"cocycle", to_json(out.cls.cocycle)}, {"triviality", to_json(out.cls.triviality)}};
    if (out.cls.twist) cls["twist"] = *out.cls.twist;
    ext["class"] = cls;
    rep["extension"] = ext;
    return rep;
}

// ---------------------------------------------------------------- compare

struct CompareOutcome {
    ClassVerdict equal = ClassVerdict::Inconclusive;
    ClassComparison comparison;
};

inline CompareOutcome compare_reports(const json& a, const json& b, const NumericsConfig& cfg) {
    if (!a.contains("extension") || !b.contains("extension"))
        throw ParseError("compare needs two extension reports");
    MonodromyRepresentation rep_a = representation_from_json(a.at("monodromy"));
    MonodromyRepresentation rep_b = representation_from_json(b.at("monodromy"));
    if (std::abs(rep_a.base_point - rep_b.base_point) > 1e-9 * std::max(1.0, std::abs(rep_a.base_point)))
        throw ParseError("reports use different base points; their cocycles are not directly comparable");
    if (rep_a.points.size() != rep_b.points.size())
        throw ParseError("reports plan loops around different point sets");
    for (std::size_t k = 0; k < rep_a.points.size(); ++k)
        if (std::abs(rep_a.points[k] - rep_b.points[k]) > 1e-9 * std::max(1.0, std::abs(rep_a.points[k])))
            throw ParseError("reports plan loops around different point sets");

    Cocycle ca = cocycle_from_json(a.at("extension").at("class").at("cocycle"));
    Cocycle cb = cocycle_from_json(b.at("extension").at("class").at("cocycle"));
    CompareOutcome out;
    out.comparison = class_equal(rep_a, ca, cb, cfg);
    out.equal = out.comparison.equal;
    return out;
}

inline json report_compare(const NumericsConfig& cfg, const CompareOutcome& out, const std::string& path_a,
                           const std::string& path_b) {
    json rep{{"engine", json{{"name", kEngineName}, {"version", kEngineVersion}}},
             {"command", "compare"},
             {"inputs", json::array({path_a, path_b})},
             {"config", config_to_json(cfg)},
             {"conventions", conventions_json()}};
    rep["comparison"] = json{{"equal", to_string(out.equal)},
                             {"max_vector_distance", out.comparison.max_vector_distance},
                             {"difference", to_json(out.comparison.difference)}};
    return rep;
}

}  // namespace pfext
