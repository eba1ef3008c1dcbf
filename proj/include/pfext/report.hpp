#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pfext/extension.hpp"

namespace pfext {

using json = nlohmann::json;

inline constexpr const char* kEngineName = "pfext";
inline constexpr const char* kEngineVersion = "0.1.0";

// --- serialization helpers (complex numbers as [re, im], matrices row-major)

inline json to_json(cdouble z) { return json::array({z.real(), z.imag()}); }

inline cdouble complex_from_json(const json& j) {
    if (j.is_number()) return cdouble(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2) throw ParseError("expected a complex number as [re, im]");
    return cdouble(j[0].get<double>(), j[1].get<double>());
}

inline json to_json(const Eigen::VectorXcd& v) {
    json data = json::array();
    for (int i = 0; i < v.size(); ++i) data.push_back(to_json(v(i)));
    return json{{"size", v.size()}, {"data", data}};
}

inline Eigen::VectorXcd vector_from_json(const json& j) {
    const auto& data = j.at("data");
    Eigen::VectorXcd v(j.at("size").get<int>());
    if (static_cast<int>(data.size()) != v.size()) throw ParseError("vector size mismatch");
    for (int i = 0; i < v.size(); ++i) v(i) = complex_from_json(data[static_cast<std::size_t>(i)]);
    return v;
}

inline json to_json(const Eigen::MatrixXcd& m) {
    json data = json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) data.push_back(to_json(m(r, c)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto& data = j.at("data");
    if (static_cast<int>(data.size()) != rows * cols) throw ParseError("matrix size mismatch");
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[static_cast<std::size_t>(r * cols + c)]);
    return m;
}

inline json to_json(const Polynomial& p) {
    json coeffs = json::array();
    for (const auto& c : p.coefficients()) coeffs.push_back(to_json(c));
    return coeffs;
}

inline json to_json(const RationalFunction& f) {
    return json{{"num", to_json(f.num())}, {"den", to_json(f.den())}, {"text", f.to_string()}};
}

inline json to_json(const DifferentialOperator& op) {
    json coeffs = json::array();
    for (const auto& c : op.coefficients()) coeffs.push_back(to_json(c));
    return json{{"order", op.order()}, {"coefficients", coeffs}, {"text", op.to_string()}};
}

inline json to_json(const SingularPoint& p) {
    json exps = json::array();
    for (const auto& e : p.exponents) exps.push_back(to_json(e));
    json out{{"at_infinity", p.at_infinity},
             {"singular", p.is_singular},
             {"regular", p.is_regular},
             {"leading_multiplicity", p.leading_multiplicity},
             {"exponents", exps}};
    if (!p.at_infinity) out["location"] = to_json(p.location);
    return out;
}

inline json to_json(const SingularityProfile& prof) {
    json pts = json::array();
    for (const auto& p : prof.points) pts.push_back(to_json(p));
    return json{{"operator", to_json(prof.op)},
                {"points", pts},
                {"fuchsian", prof.fuchsian},
                {"separation", prof.separation}};
}

inline json to_json(const PathPolyline& p) {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back(to_json(v));
    return json{{"closed", p.closed}, {"vertices", verts}};
}

inline json to_json(const LoopPlan& plan) {
    json pts = json::array();
    for (const auto& p : plan.points) pts.push_back(to_json(p));
    json loops = json::array();
    for (const auto& l : plan.loops) loops.push_back(to_json(l));
    return json{{"base_point", to_json(plan.base_point)}, {"clearance", plan.clearance},
                {"cut_angle", plan.cut_angle},           {"points", pts},
                {"radii", plan.radii},                   {"loops", loops},
                {"outer_loop", to_json(plan.infinity_loop)}};
}

inline json to_json(const MonodromyRepresentation& rep) {
    json ms = json::array();
    for (const auto& m : rep.matrices) ms.push_back(to_json(m));
    json pts = json::array();
    for (const auto& p : rep.points) pts.push_back(to_json(p));
    return json{{"dim", rep.dim},
                {"base_point", to_json(rep.base_point)},
                {"points", pts},
                {"matrices", ms},
                {"errors", rep.errors},
                {"m_infinity", to_json(rep.m_infinity)},
                {"m_infinity_error", rep.m_infinity_error}};
}

inline MonodromyRepresentation representation_from_json(const json& j) {
    MonodromyRepresentation rep;
    rep.dim = j.at("dim").get<int>();
    rep.base_point = complex_from_json(j.at("base_point"));
    for (const auto& p : j.at("points")) rep.points.push_back(complex_from_json(p));
    for (const auto& m : j.at("matrices")) rep.matrices.push_back(matrix_from_json(m));
    rep.errors = j.value("errors", std::vector<double>(rep.matrices.size(), 0.0));
    if (j.contains("m_infinity")) rep.m_infinity = matrix_from_json(j.at("m_infinity"));
    rep.m_infinity_error = j.value("m_infinity_error", 0.0);
    return rep;
}

inline json to_json(const Cocycle& a) {
    json vs = json::array();
    for (const auto& v : a.vectors) vs.push_back(to_json(v));
    return json{{"dim", a.dim}, {"vectors", vs}, {"errors", a.errors}};
}

inline Cocycle cocycle_from_json(const json& j) {
    Cocycle a;
    a.dim = j.at("dim").get<int>();
    for (const auto& v : j.at("vectors")) a.vectors.push_back(vector_from_json(v));
    a.errors = j.value("errors", std::vector<double>(a.vectors.size(), 0.0));
    return a;
}

inline json to_json(const CoboundaryResult& r) {
    return json{{"verdict", to_string(r.verdict)},
                {"witness", to_json(r.witness)},
                {"residual", r.residual},
                {"residual_rel", r.residual_rel},
                {"cocycle_norm", r.cocycle_norm}};
}

inline json to_json(const AdmissibilityReport& r) {
    json uni = json::array();
    for (const auto& e : r.unipotency)
        uni.push_back(json{{"point", to_json(e.point)}, {"norm", e.norm}, {"pass", e.pass}});
    return json{{"unipotency", uni},
                {"all_unipotent", r.all_unipotent},
                {"irreducible", r.irreducible},
                {"irreducibility_is_heuristic", r.irreducibility_is_heuristic},
                {"admissible", r.admissible}};
}

inline json to_json(const std::vector<LocalConsistencyEntry>& entries) {
    json out = json::array();
    for (const auto& e : entries) {
        json item{{"at_infinity", e.at_infinity}, {"distance", e.distance}, {"pass", e.pass}};
        if (!e.at_infinity) item["point"] = to_json(e.point);
        out.push_back(item);
    }
    return out;
}

inline json config_to_json(const NumericsConfig& cfg) {
    return json{{"theta", cfg.theta},
                {"taylor_order_min", cfg.taylor_order_min},
                {"taylor_order_max", cfg.taylor_order_max},
                {"tail_target", cfg.tail_target},
                {"step_scale", cfg.step_scale},
                {"clearance", cfg.clearance},
                {"clearance_factor", cfg.clearance_factor},
                {"tol_class", cfg.tol_class},
                {"tol_consistency", cfg.tol_consistency},
                {"tol_eigen_match", cfg.tol_eigen_match},
                {"cluster_tol", cfg.cluster_tol},
                {"gcd_tol", cfg.gcd_tol},
                {"seed", cfg.seed}};
}

inline NumericsConfig config_from_json(const json& j, NumericsConfig base = NumericsConfig{}) {
    NumericsConfig cfg = base;
    cfg.theta = j.value("theta", cfg.theta);
    cfg.taylor_order_min = j.value("taylor_order_min", cfg.taylor_order_min);
    cfg.taylor_order_max = j.value("taylor_order_max", cfg.taylor_order_max);
    cfg.tail_target = j.value("tail_target", cfg.tail_target);
    cfg.step_scale = j.value("step_scale", cfg.step_scale);
    cfg.clearance = j.value("clearance", cfg.clearance);
    cfg.clearance_factor = j.value("clearance_factor", cfg.clearance_factor);
    cfg.tol_class = j.value("tol_class", cfg.tol_class);
    cfg.tol_consistency = j.value("tol_consistency", cfg.tol_consistency);
    cfg.tol_eigen_match = j.value("tol_eigen_match", cfg.tol_eigen_match);
    cfg.cluster_tol = j.value("cluster_tol", cfg.cluster_tol);
    cfg.gcd_tol = j.value("gcd_tol", cfg.gcd_tol);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

// The sign, ordering and basis conventions every report is expressed in.
inline json conventions_json() {
    return json{
        {"jet_basis", "unit jets (h, h', ..., h^(n-1)) at the base point; fundamental matrix is I there"},
        {"matrix_action", "continued jet = M * jet (columns are continued basis solutions)"},
        {"loop_orientation", "each generator loop encircles its point once counterclockwise"},
        {"loop_ordering", "by argument seen from the base point, counterclockwise starting at the cut ray"},
        {"composition", "gamma.delta means gamma first; transfer of the composite is T(delta)*T(gamma)"},
        {"cocycle_rule", "a(gamma.delta) = a(delta) + M(delta)*a(gamma)"},
        {"cocycle_sign", "continued particular jet = M*jet + a"},
        {"outer_loop", "out along the cut ray, clockwise around all points, back; its transfer is the inverse of the ordered product"},
        {"complex_format", "[re, im]"},
        {"matrix_format", "row-major data with explicit rows/cols"}};
}

}  // namespace pfext
