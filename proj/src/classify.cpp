#include "k3fat/classify.hpp"

#include <sstream>

namespace k3fat {

namespace {

void require_classifiable(const K3System& sys) {
    sys.validate();
    if (sys.points.empty() || !sys.is_homogeneous())
        throw std::invalid_argument("classification needs a homogeneous system with at least one point");
    if (!decompose_4u9w(sys.point_count())) throw std::invalid_argument("number of points must be 4^u 9^w");
}

DimensionReport planar_lemma(const PlanarSystem& sys) {
    if (sys.points.size() != 1 || (sys.points.front().count != 4 && sys.points.front().count != 9))
        throw std::invalid_argument("planar base policy covers L(delta, mu^c) with c in {4, 9} only");
    const auto& g = sys.points.front();
    auto r = DimensionReport::known(vdim_planar(sys), planar_dim_c49(sys.degree, g.multiplicity, g.count),
                                    Status::NonSpecial);
    r.notes.emplace_back("planar_lemma_4_9");
    return r;
}

DimensionReport from_oracle(const K3System& sys, const oracle::CrossCheckedResult& measured) {
    const Int v = vdim_k3(sys);
    const Int e = edim(v);
    if (measured.dim < e) throw std::logic_error("oracle reported a dimension below the expected dimension");
    auto r = DimensionReport::known(v, measured.dim, measured.dim == e ? Status::NonSpecial : Status::Special);
    r.notes.emplace_back(measured.low_confidence ? "oracle (low confidence)" : "oracle");
    return r;
}

} // namespace

std::string_view to_string(BasePolicy::Kind k) {
    switch (k) {
    case BasePolicy::Kind::Gamma4Proved: return "GAMMA4_PROVED";
    case BasePolicy::Kind::Hypothesis: return "HYPOTHESIS";
    case BasePolicy::Kind::OracleBacked: return "ORACLE_BACKED";
    }
    return "GAMMA4_PROVED";
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Agree: return "AGREE";
    case Verdict::Disagree: return "DISAGREE";
    case Verdict::Skipped: return "SKIPPED";
    }
    return "SKIPPED";
}

void BasePolicy::validate_for(Int gamma) const {
    switch (kind) {
    case Kind::Gamma4Proved:
        if (gamma != 4) throw std::invalid_argument("the proved base policy applies to gamma = 4 only");
        break;
    case Kind::Hypothesis:
        // L^4(d, 2d) is special, so the hypothesis is false on quartics
        if (gamma == 4) throw std::invalid_argument("the base hypothesis fails for gamma = 4; use the proved policy");
        break;
    case Kind::OracleBacked:
        if (gamma != 4) throw std::invalid_argument("the oracle-backed policy applies to gamma = 4 only");
        oracle_config.validate();
        break;
    }
}

DimensionReport base_gamma4(Int degree, Int mu) {
    if (degree < 1 || mu < 1) throw std::invalid_argument("degree and multiplicity must be positive");
    const Int v = vdim_k3(K3System::homogeneous(4, degree, mu, 1));
    DimensionReport r;
    if (mu == 2 * degree && degree >= 2)
        r = DimensionReport::known(v, 0, Status::Special);
    else if (mu >= 2 * degree + 1)
        r = DimensionReport::known(v, -1, Status::NonSpecial);
    else
        r = DimensionReport::known(v, edim(v), Status::NonSpecial);
    r.notes.emplace_back("gamma4_single_point");
    return r;
}

Int planar_dim_c49(Int delta, Int mu, Int c) {
    if (c != 4 && c != 9) throw std::invalid_argument("c must be 4 or 9");
    if (mu < 1) throw std::invalid_argument("multiplicity must be positive");
    if (delta < 0) return -1;
    return edim(vdim_planar(PlanarSystem::homogeneous(delta, mu, c)));
}

BaseResolvers resolvers_for(const BasePolicy& policy, Int gamma) {
    policy.validate_for(gamma);
    BaseResolvers r;
    r.planar = planar_lemma;
    switch (policy.kind) {
    case BasePolicy::Kind::Gamma4Proved:
        r.surface = [](const K3System& sys) { return base_gamma4(sys.degree, sys.multiplicity()); };
        break;
    case BasePolicy::Kind::Hypothesis:
        r.surface = [](const K3System& sys) {
            const Int v = vdim_k3(sys);
            auto rep = DimensionReport::known(v, edim(v), Status::Conditional);
            rep.notes.emplace_back("hypothesis");
            return rep;
        };
        break;
    case BasePolicy::Kind::OracleBacked:
        r.surface = [cfg = policy.oracle_config, second = policy.second_prime](const K3System& sys) {
            return from_oracle(sys, oracle::k3_dim_cross_checked(sys.degree, sys.points, cfg, second));
        };
        break;
    }
    return r;
}

TheoremPrediction gamma4_prediction(Int degree, Int multiplicity, Int count) {
    const auto powers = decompose_4u9w(count);
    if (!powers) throw std::invalid_argument("number of points must be 4^u 9^w");
    if (count == 1) {
        const auto r = base_gamma4(degree, multiplicity);
        return {true, *r.dim, r.status};
    }
    const Int v = vdim_k3(K3System::homogeneous(4, degree, multiplicity, count));
    if (v >= -1) return {true, v, Status::NonSpecial};
    if (powers->u > 0 || (2 * degree) % 3 != 1) return {true, -1, Status::NonSpecial};
    return {};
}

DimensionReport classify(const K3System& sys, const BasePolicy& policy,
                         const std::optional<oracle::PrimeFieldConfig>& advisory_oracle) {
    require_classifiable(sys);
    const auto engine_report = recurse(sys, resolvers_for(policy, sys.gamma));
    auto report = engine_report;

    if (policy.kind == BasePolicy::Kind::Gamma4Proved) {
        const Int d = sys.degree;
        const Int m = sys.multiplicity();
        const Int n = sys.point_count();
        const auto predicted = gamma4_prediction(d, m, n);
        if (!predicted.proved) {
            report = DimensionReport::unknown(engine_report.vdim);
            report.trace = engine_report.trace;
            report.notes.emplace_back("open case: v <= -1 with u = 0 and 2d = 1 mod 3");
            if (engine_report.definite()) {
                std::ostringstream os;
                os << "engine certificate outside the classified range: dim " << *engine_report.dim;
                report.notes.push_back(os.str());
            }
        } else if (engine_report.definite()) {
            if (*engine_report.dim != predicted.dim || engine_report.status != predicted.status)
                throw std::logic_error("degeneration engine contradicts the quartic classification");
        } else {
            report.notes.insert(report.notes.begin(), "degeneration chain incomplete");
        }
    }

    if (!report.definite() && advisory_oracle && sys.gamma == 4) {
        try {
            report.advisory_oracle_dim = oracle::k3_dim_oracle(sys.degree, sys.points, *advisory_oracle).dim;
        } catch (const oracle::BudgetExceeded&) {
            report.notes.emplace_back("advisory oracle skipped: row budget exceeded");
        }
    }
    report.check_invariants();
    return report;
}

VerificationOutcome verify(const K3System& sys, const DimensionReport& report, const oracle::PrimeFieldConfig& cfg,
                           std::uint64_t second_prime) {
    VerificationOutcome out;
    if (sys.gamma != 4) {
        out.reason = "oracle covers gamma = 4 only";
        return out;
    }
    oracle::CrossCheckedResult measured;
    try {
        measured = oracle::k3_dim_cross_checked(sys.degree, sys.points, cfg, second_prime);
    } catch (const oracle::BudgetExceeded& e) {
        out.reason = e.what();
        out.budget_exceeded = true;
        return out;
    }
    out.oracle_dim = measured.dim;
    out.low_confidence = measured.low_confidence;
    if (!report.definite()) {
        out.reason = "report is UNKNOWN; oracle dimension recorded as advisory data";
        return out;
    }
    out.verdict = *report.dim == measured.dim ? Verdict::Agree : Verdict::Disagree;
    if (out.low_confidence) out.reason = "oracle trials or primes disagree";
    return out;
}

} // namespace k3fat
