#include "k3fat/serialize.hpp"

namespace k3fat {

namespace {

Json optional_int(const std::optional<Int>& v) { return v ? Json(*v) : Json(nullptr); }

Json system_json(const K3System& sys) {
    Json j;
    j["gamma"] = sys.gamma;
    j["d"] = sys.degree;
    j["m"] = sys.points.empty() ? 0 : sys.points.front().multiplicity;
    j["n"] = sys.point_count();
    return j;
}

std::string_view kind_name(TraceNode::Kind k) {
    switch (k) {
    case TraceNode::Kind::Step: return "step";
    case TraceNode::Kind::Leaf: return "leaf";
    case TraceNode::Kind::Unresolved: return "unresolved";
    }
    return "unresolved";
}

} // namespace

Json to_json(const BranchSummary& b) {
    Json j;
    j["vdim"] = b.vdim;
    j["edim"] = b.edim;
    j["dim"] = optional_int(b.dim);
    j["status"] = to_string(b.status);
    return j;
}

Json to_json(const DegenerationStep& s) {
    Json j;
    j["step"] = {{"c", s.c}, {"b", s.b}, {"k", s.k}, {"regime", to_string(s.regime)}};
    j["branches"] = {{"surface", to_json(s.surface)},
                     {"surface_hat", to_json(s.surface_hat)},
                     {"planar", to_json(s.planar)},
                     {"planar_hat", to_json(s.planar_hat)}};
    j["r_surface"] = optional_int(s.r_surface);
    j["r_planar"] = optional_int(s.r_planar);
    j["intersection_dim"] = optional_int(s.intersection_dim);
    j["l0"] = optional_int(s.l0);
    return j;
}

Json to_json(const TraceNode& node) {
    Json j;
    j["system"] = system_json(node.system);
    j["result"] = to_json(node.result);
    j["kind"] = kind_name(node.kind);
    j["rule"] = node.rule;
    if (node.step) {
        const Json step = to_json(*node.step);
        for (const auto& [key, value] : step.items()) j[key] = value;
        j["children"] = {{"surface", to_json(*node.surface_child)},
                         {"surface_hat", to_json(*node.surface_hat_child)}};
    }
    return j;
}

Json to_json(const DimensionReport& r) {
    Json j;
    j["vdim"] = r.vdim;
    j["edim"] = r.edim;
    j["dim"] = optional_int(r.dim);
    j["status"] = to_string(r.status);
    if (r.advisory_oracle_dim) j["advisory_oracle_dim"] = *r.advisory_oracle_dim;
    if (!r.notes.empty()) j["notes"] = r.notes;
    if (r.trace) j["trace"] = to_json(*r.trace);
    return j;
}

Json to_json(const VerificationOutcome& v) {
    Json j;
    j["verdict"] = to_string(v.verdict);
    j["oracle_dim"] = optional_int(v.oracle_dim);
    j["low_confidence"] = v.low_confidence;
    j["reason"] = v.reason;
    return j;
}

Json instance_to_json(const oracle::PrimeField& f, const oracle::QuarticSurfaceInstance& inst,
                      const oracle::Matrix* matrix) {
    Json j;
    j["prime"] = f.modulus();
    Json coeffs = Json::array();
    const auto& terms = inst.equation.terms();
    for (std::size_t t = 0; t < terms.size(); ++t)
        coeffs.push_back({{"exponents", terms[t]}, {"coefficient", inst.equation.coefficients()[t]}});
    j["coefficients"] = coeffs;
    Json points = Json::array();
    for (const auto& p : inst.points) {
        Json pj;
        pj["coords"] = p.coords;
        pj["multiplicity"] = p.multiplicity;
        pj["solved"] = p.chart.solved;
        pj["params"] = p.chart.params;
        Json series = Json::array();
        for (int i = 0; i < p.chart.phi.order(); ++i)
            for (int k = 0; i + k < p.chart.phi.order(); ++k)
                if (const auto c = p.chart.phi.get(i, k); c != 0) series.push_back({i, k, c});
        pj["local_series"] = series;
        points.push_back(pj);
    }
    j["points"] = points;
    if (matrix) {
        Json rows = Json::array();
        for (std::size_t r = 0; r < matrix->rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < matrix->cols(); ++c) row.push_back((*matrix)(r, c));
            rows.push_back(row);
        }
        j["matrix"] = rows;
    }
    return j;
}

std::string to_document(const Json& j) { return j.dump(2) + "\n"; }

} // namespace k3fat
