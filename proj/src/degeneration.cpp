#include "k3fat/degeneration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace k3fat {

namespace {

using namespace checked;

std::string describe(const K3System& sys) {
    std::ostringstream os;
    os << "L^" << sys.gamma << "(" << sys.degree;
    for (const auto& g : sys.points) os << ", " << g.multiplicity << "^" << g.count;
    os << ")";
    return os.str();
}

/// Largest k >= 0 with scale * (k^2 + k) <= bound, or -1 when bound < 0.
Int max_k_quadratic(Int scale, Int bound) {
    if (bound < 0) return -1;
    auto k = static_cast<Int>(std::sqrt(static_cast<long double>(bound) / static_cast<long double>(scale)));
    while (k > 0 && mul(scale, add(mul(k, k), k)) > bound) --k;
    while (mul(scale, add(mul(k + 1, k + 1), k + 1)) <= bound) ++k;
    return k;
}

/// Smallest k >= 1 with scale * (k^2 + 3k) >= bound.
Int min_k_quadratic3(Int scale, Int bound) {
    if (mul(scale, 4) >= bound) return 1;
    auto k = static_cast<Int>(std::sqrt(static_cast<long double>(bound) / static_cast<long double>(scale)));
    k = std::max<Int>(k, 1);
    while (k > 1 && mul(scale, add(mul(k - 1, k - 1), mul(3, k - 1))) >= bound) --k;
    while (mul(scale, add(mul(k, k), mul(3, k))) < bound) ++k;
    return k;
}

void require_splittable(const K3System& sys, Int c) {
    if (!sys.is_homogeneous() || sys.points.empty())
        throw std::invalid_argument("degeneration requires a homogeneous system with points");
    if (c != 4 && c != 9) throw std::invalid_argument("c must be 4 or 9");
    if (sys.point_count() % c != 0) throw std::invalid_argument("c must divide the number of points");
}

} // namespace

std::string_view to_string(Regime r) { return r == Regime::NonNegative ? "NONNEG" : "NEG"; }

bool KSelectionBounds::admits(Int k) const {
    if (k < 1) return false;
    const Int quad1 = add(mul(k, k), k);
    const Int quad3 = add(mul(k, k), mul(3, k));
    if (regime == Regime::NonNegative) return mul(alpha_den, quad1) <= alpha_num && quad3 >= beta;
    return mul(alpha_den, quad3) >= alpha_num && quad1 <= beta;
}

KSelectionBounds selection_bounds(const K3System& sys, Int c, Regime regime) {
    require_splittable(sys, c);
    const Int b = sys.point_count() / c;
    const Int m = sys.multiplicity();
    const Int base = add(mul(sys.gamma, mul(sys.degree, sys.degree)), 4);
    const Int cm = mul(c, mul(m, add(m, 1)));

    KSelectionBounds bounds;
    bounds.regime = regime;
    bounds.alpha_den = b;
    if (regime == Regime::NonNegative) {
        bounds.alpha_num = base;
        bounds.beta = cm - 2;
        bounds.hi = max_k_quadratic(b, bounds.alpha_num);
        bounds.lo = min_k_quadratic3(1, bounds.beta);
    } else {
        bounds.alpha_num = base - mul(2, b);
        bounds.beta = cm;
        bounds.lo = min_k_quadratic3(b, bounds.alpha_num);
        bounds.hi = max_k_quadratic(1, bounds.beta);
    }
    bounds.lo = std::max<Int>(bounds.lo, 1);
    return bounds;
}

std::vector<Int> candidate_ks(const K3System& sys, Int c, Regime regime, SelectionRules rules) {
    const auto bounds = selection_bounds(sys, c, regime);
    const Int b = sys.point_count() / c;
    const Int d = sys.degree;
    std::vector<Int> ks;
    if (rules.gamma4_final_step && sys.gamma == 4 && b == 1) {
        if (regime == Regime::Negative) {
            if (bounds.admits(2 * d)) ks.push_back(2 * d);
            return ks;
        }
        for (Int k = bounds.hi; k >= bounds.lo; --k)
            if (k != 2 * d - 1 && k != 2 * d) ks.push_back(k);
        return ks;
    }
    for (Int k = bounds.hi; k >= bounds.lo; --k) ks.push_back(k);
    return ks;
}

std::optional<Int> select_k(const K3System& sys, Int c, Regime regime, SelectionRules rules) {
    auto ks = candidate_ks(sys, c, regime, rules);
    if (ks.empty()) return std::nullopt;
    return ks.front();
}

Int combine_dims(Int l_surface, Int l_surface_hat, Int l_planar, Int l_planar_hat, Int b, Int k) {
    const Int r_surface = sub(sub(l_surface, l_surface_hat), 1);
    const Int r_planar = sub(sub(l_planar, l_planar_hat), 1);
    const Int intersection = std::max<Int>(-1, sub(add(r_surface, mul(b, r_planar)), mul(b, k)));
    return add(add(intersection, mul(b, add(l_planar_hat, 1))), add(l_surface_hat, 1));
}

bool BranchVdims::identity_holds() const {
    const Int f1 = add(add(surface, mul(b, planar_hat)), b);
    const Int f2 = add(surface, mul(b, sub(planar, k)));
    const Int f3 = add(add(surface_hat, mul(b, planar)), b);
    const Int f4 = add(surface_hat, mul(b, add(add(planar_hat, k), 2)));
    return v == f1 && v == f2 && v == f3 && v == f4;
}

BranchVdims branch_vdims(const K3System& sys, Int c, Int k) {
    require_splittable(sys, c);
    if (k < 1) throw std::invalid_argument("k must be positive");
    const Int b = sys.point_count() / c;
    const Int m = sys.multiplicity();
    BranchVdims out;
    out.b = b;
    out.k = k;
    out.v = vdim_k3(sys);
    out.surface = vdim_k3(K3System::homogeneous(sys.gamma, sys.degree, k, b));
    out.surface_hat = vdim_k3(K3System::homogeneous(sys.gamma, sys.degree, k + 1, b));
    out.planar = vdim_planar(PlanarSystem::homogeneous(k, m, c));
    out.planar_hat = vdim_planar(PlanarSystem::homogeneous(k - 1, m, c));
    return out;
}

bool check_vdim_identity(const K3System& sys, Int c, Int k) { return branch_vdims(sys, c, k).identity_holds(); }

BranchSummary BranchSummary::of(const DimensionReport& r) { return {r.vdim, r.edim, r.dim, r.status}; }

DegenerationEngine::DegenerationEngine(Int gamma, BaseResolvers base, EngineOptions options)
    : gamma_(gamma), base_(std::move(base)), options_(options) {
    if (!base_.surface || !base_.planar) throw std::invalid_argument("engine needs both base resolvers");
}

DimensionReport DegenerationEngine::resolve(Int degree, Int multiplicity, Int count) {
    auto root = node(degree, multiplicity, count);
    DimensionReport report;
    report.vdim = root->result.vdim;
    report.edim = root->result.edim;
    report.dim = root->result.dim;
    report.status = root->result.status;
    report.trace = root;
    if (root->kind == TraceNode::Kind::Unresolved) report.notes.push_back(root->rule);
    report.check_invariants();
    return report;
}

std::shared_ptr<const TraceNode> DegenerationEngine::node(Int degree, Int multiplicity, Int count) {
    const Key key{degree, multiplicity, count};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto computed = compute(degree, multiplicity, count);
    memo_.emplace(key, computed);
    return computed;
}

DegenerationStep DegenerationEngine::evaluate_step(Int degree, Int multiplicity, Int count, Int c, Int k,
                                                   Regime regime) {
    const auto sys = K3System::homogeneous(gamma_, degree, multiplicity, count);
    require_splittable(sys, c);
    if (k < 1) throw std::invalid_argument("k must be positive");

    DegenerationStep step;
    step.c = c;
    step.b = count / c;
    step.k = k;
    step.regime = regime;
    step.surface_branch = K3System::homogeneous(gamma_, degree, k, step.b);
    step.surface_branch_hat = K3System::homogeneous(gamma_, degree, k + 1, step.b);
    step.planar_branch = PlanarSystem::homogeneous(k, multiplicity, c);
    step.planar_branch_hat = PlanarSystem::homogeneous(k - 1, multiplicity, c);
    step.surface = node(degree, k, step.b)->result;
    step.surface_hat = node(degree, k + 1, step.b)->result;
    step.planar = BranchSummary::of(base_.planar(step.planar_branch));
    step.planar_hat = BranchSummary::of(base_.planar(step.planar_branch_hat));

    if (step.surface.dim && step.surface_hat.dim && step.planar.dim && step.planar_hat.dim) {
        const Int ls = *step.surface.dim;
        const Int ls_hat = *step.surface_hat.dim;
        const Int lp = *step.planar.dim;
        const Int lp_hat = *step.planar_hat.dim;
        step.r_surface = sub(sub(ls, ls_hat), 1);
        step.r_planar = sub(sub(lp, lp_hat), 1);
        step.intersection_dim =
            std::max<Int>(-1, sub(add(*step.r_surface, mul(step.b, *step.r_planar)), mul(step.b, k)));
        step.l0 = combine_dims(ls, ls_hat, lp, lp_hat, step.b, k);
    }
    return step;
}

bool DegenerationEngine::special_branch_admitted(const DegenerationStep& step, Int degree) const {
    // The final Negative step on a quartic: L^4(d, 2d) is special of dimension 0,
    // and the step still closes when c = 4, or c = 9 with 2d != 1 mod 3.
    return gamma_ == 4 && step.regime == Regime::Negative && step.b == 1 && step.k == 2 * degree &&
           (step.c == 4 || (2 * degree) % 3 != 1) && step.surface.dim.has_value() &&
           step.surface_hat.dim.has_value();
}

std::shared_ptr<const TraceNode> DegenerationEngine::compute(Int degree, Int multiplicity, Int count) {
    const auto sys = K3System::homogeneous(gamma_, degree, multiplicity, count);
    const Int v = vdim_k3(sys);
    const Int e = edim(v);

    auto out = std::make_shared<TraceNode>();
    out->system = sys;
    out->result = {v, e, std::nullopt, Status::Unknown};

    if (count == 1) {
        const auto report = base_.surface(sys);
        report.check_invariants();
        if (report.vdim != v) throw std::logic_error("base resolver returned a wrong vdim");
        out->kind = report.definite() ? TraceNode::Kind::Leaf : TraceNode::Kind::Unresolved;
        out->rule = report.notes.empty() ? std::string("base_policy") : report.notes.front();
        out->result = BranchSummary::of(report);
        return out;
    }

    std::vector<Regime> regimes;
    if (v >= -1) regimes.push_back(Regime::NonNegative);
    if (v <= -1) regimes.push_back(Regime::Negative);
    std::vector<Int> cs;
    if (count % 9 == 0) cs.push_back(9);
    if (count % 4 == 0) cs.push_back(4);

    std::string first_failure;
    auto fail = [&](std::string reason) {
        if (first_failure.empty()) first_failure = std::move(reason);
    };

    for (const auto regime : regimes) {
        for (const Int c : cs) {
            const auto ks = candidate_ks(sys, c, regime, options_.rules);
            if (ks.empty()) {
                std::ostringstream os;
                os << "no admissible k for c=" << c << " in regime " << to_string(regime);
                fail(os.str());
            }
            for (const Int k : ks) {
                auto step = evaluate_step(degree, multiplicity, count, c, k, regime);
                const bool branches_ok = (step.surface.nonspecial() && step.surface_hat.nonspecial()) ||
                                         special_branch_admitted(step, degree);
                if (!step.l0) {
                    const auto& bad = step.surface.dim ? step.surface_branch_hat : step.surface_branch;
                    fail("branch " + describe(bad) + " unresolved");
                } else if (!branches_ok) {
                    const auto& bad = step.surface.nonspecial() ? step.surface_branch_hat : step.surface_branch;
                    fail("special branch " + describe(bad) + " outside the proved final-step cases");
                } else if (*step.l0 != e) {
                    std::ostringstream os;
                    os << "l0=" << *step.l0 << " exceeds expected dimension " << e << " at c=" << c << " k=" << k;
                    fail(os.str());
                } else {
                    const bool conditional = step.surface.status == Status::Conditional ||
                                             step.surface_hat.status == Status::Conditional ||
                                             step.planar.status == Status::Conditional ||
                                             step.planar_hat.status == Status::Conditional;
                    out->kind = TraceNode::Kind::Step;
                    out->rule = "degeneration";
                    out->result = {v, e, e, conditional ? Status::Conditional : Status::NonSpecial};
                    out->surface_child = node(degree, k, count / c);
                    out->surface_hat_child = node(degree, k + 1, count / c);
                    out->step = std::move(step);
                    return out;
                }
                if (!options_.fallback_search) break;
            }
            if (!options_.fallback_search) break;
        }
        if (!options_.fallback_search) break;
    }

    if (multiplicity == 1) {
        // general simple points impose independent conditions
        out->kind = TraceNode::Kind::Leaf;
        out->rule = "simple_points";
        out->result = {v, e, e, Status::NonSpecial};
        return out;
    }

    out->kind = TraceNode::Kind::Unresolved;
    out->rule = first_failure.empty() ? "no degeneration step applies" : first_failure;
    return out;
}

DimensionReport recurse(const K3System& sys, const BaseResolvers& base, EngineOptions options) {
    sys.validate();
    if (sys.points.empty() || !sys.is_homogeneous())
        throw std::invalid_argument("recursion needs a homogeneous system with at least one point");
    if (!decompose_4u9w(sys.point_count())) throw std::invalid_argument("number of points must be 4^u 9^w");
    DegenerationEngine engine(sys.gamma, base, options);
    return engine.resolve(sys.degree, sys.multiplicity(), sys.point_count());
}

void check_trace(const TraceNode& node) {
    const auto& r = node.result;
    if (r.edim != edim(r.vdim)) throw std::logic_error("trace: edim mismatch");
    if (r.vdim != vdim_k3(node.system)) throw std::logic_error("trace: vdim mismatch");
    if (r.status == Status::Special && node.system.point_count() != 1)
        throw std::logic_error("trace: SPECIAL away from a single-point leaf");
    if (node.kind != TraceNode::Kind::Step) return;

    if (!node.step || !node.surface_child || !node.surface_hat_child)
        throw std::logic_error("trace: incomplete step node");
    const auto& s = *node.step;
    if (s.b * s.c != node.system.point_count()) throw std::logic_error("trace: b * c != n");
    if (!s.l0 || !s.r_surface || !s.r_planar || !s.intersection_dim)
        throw std::logic_error("trace: step without combined dimension");
    if (*s.r_surface != *s.surface.dim - *s.surface_hat.dim - 1 || *s.r_planar != *s.planar.dim - *s.planar_hat.dim - 1)
        throw std::logic_error("trace: r-values inconsistent");
    if (*s.intersection_dim != std::max<Int>(-1, *s.r_surface + s.b * *s.r_planar - s.b * s.k))
        throw std::logic_error("trace: intersection dimension inconsistent");
    if (*s.l0 != *s.intersection_dim + s.b * (*s.planar_hat.dim + 1) + *s.surface_hat.dim + 1)
        throw std::logic_error("trace: l0 inconsistent");
    if (s.regime == Regime::NonNegative && *s.l0 != r.vdim) throw std::logic_error("trace: NONNEG step with l0 != v");
    if (s.regime == Regime::Negative && *s.l0 != -1) throw std::logic_error("trace: NEG step with l0 != -1");
    if (!(node.surface_child->system == s.surface_branch) || !(node.surface_hat_child->system == s.surface_branch_hat))
        throw std::logic_error("trace: children do not match branch systems");
    check_trace(*node.surface_child);
    check_trace(*node.surface_hat_child);
}

} // namespace k3fat
