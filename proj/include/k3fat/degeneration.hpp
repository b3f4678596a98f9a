#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "k3fat/core.hpp"

namespace k3fat {

/// Which induction chain a step belongs to: v >= -1 or v <= -1.
enum class Regime { NonNegative, Negative };

std::string_view to_string(Regime r);

/// Rational alpha = alpha_num / alpha_den, integer beta, and the admissible
/// integer interval [lo, hi] for k (empty when lo > hi).
///
/// NonNegative: k^2 + k <= alpha  and  k^2 + 3k >= beta,
///              alpha = (gamma d^2 + 4) / b,      beta = c m (m + 1) - 2.
/// Negative:    k^2 + 3k >= alpha and  k^2 + k <= beta,
///              alpha = (gamma d^2 + 4) / b - 2,  beta = c m (m + 1).
struct KSelectionBounds {
    Regime regime = Regime::NonNegative;
    Int alpha_num = 0;
    Int alpha_den = 1;
    Int beta = 0;
    Int lo = 1;
    Int hi = 0;

    [[nodiscard]] bool empty() const { return lo > hi; }
    /// Direct evaluation of both inequalities at k.
    [[nodiscard]] bool admits(Int k) const;
};

KSelectionBounds selection_bounds(const K3System& sys, Int c, Regime regime);

/// Tie-break rules layered on top of the plain interval.
struct SelectionRules {
    /// On gamma = 4 with b = 1: NonNegative excludes k in {2d - 1, 2d},
    /// Negative forces k = 2d.
    bool gamma4_final_step = true;
};

/// Admissible k in preference order (largest first). With the gamma = 4
/// final-step rules the list may be empty even though the interval is not.
std::vector<Int> candidate_ks(const K3System& sys, Int c, Regime regime, SelectionRules rules = {});

/// First entry of candidate_ks, or nullopt.
std::optional<Int> select_k(const K3System& sys, Int c, Regime regime, SelectionRules rules = {});

/// l0 = max(-1, r_S + b r_P - b k) + b (l^_P + 1) + l^_S + 1 with
/// r_S = l_S - l^_S - 1 and r_P = l_P - l^_P - 1.
Int combine_dims(Int l_surface, Int l_surface_hat, Int l_planar, Int l_planar_hat, Int b, Int k);

/// Virtual dimensions of a system and its four branch systems for (c, k).
struct BranchVdims {
    Int v = 0;
    Int surface = 0;
    Int surface_hat = 0;
    Int planar = 0;
    Int planar_hat = 0;
    Int b = 1;
    Int k = 1;

    /// v = v_S + b v^_P + b = v_S + b (v_P - k) = v^_S + b v_P + b = v^_S + b (v^_P + k + 2).
    [[nodiscard]] bool identity_holds() const;
};

/// Requires a homogeneous system, c | n and k >= 1.
BranchVdims branch_vdims(const K3System& sys, Int c, Int k);

bool check_vdim_identity(const K3System& sys, Int c, Int k);

struct BranchSummary {
    Int vdim = 0;
    Int edim = 0;
    std::optional<Int> dim;
    Status status = Status::Unknown;

    static BranchSummary of(const DimensionReport& r);
    [[nodiscard]] bool nonspecial() const {
        return status == Status::NonSpecial || status == Status::Conditional;
    }
};

struct DegenerationStep {
    Int c = 4;
    Int b = 1;
    Int k = 1;
    Regime regime = Regime::NonNegative;
    K3System surface_branch;
    K3System surface_branch_hat;
    PlanarSystem planar_branch;
    PlanarSystem planar_branch_hat;
    BranchSummary surface;
    BranchSummary surface_hat;
    BranchSummary planar;
    BranchSummary planar_hat;
    // set once all four branch dimensions are known
    std::optional<Int> r_surface;
    std::optional<Int> r_planar;
    std::optional<Int> intersection_dim;
    std::optional<Int> l0;
};

/// One node of the audit trail. A Step node certifies its system through
/// `step`; its surface branches are resolved by the two children.
struct TraceNode {
    enum class Kind { Step, Leaf, Unresolved };

    K3System system;
    BranchSummary result;
    Kind kind = Kind::Unresolved;
    /// Leaf rule name, or the reason an Unresolved node could not be certified.
    std::string rule;
    std::optional<DegenerationStep> step;
    std::shared_ptr<const TraceNode> surface_child;
    std::shared_ptr<const TraceNode> surface_hat_child;
};

/// How the recursion resolves the systems it cannot degenerate further.
struct BaseResolvers {
    /// Single-point systems L^gamma(d, mu).
    std::function<DimensionReport(const K3System&)> surface;
    /// Planar branch systems L(delta, mu^c), c in {4, 9}.
    std::function<DimensionReport(const PlanarSystem&)> planar;
};

struct EngineOptions {
    SelectionRules rules;
    /// Try every admissible (c, k) when the preferred one does not certify.
    bool fallback_search = true;
};

/// Recursive certifier for homogeneous systems L^gamma(d, m^n), n = 4^u 9^w.
/// Results are memoized per (d, m, n); one engine serves one gamma.
class DegenerationEngine {
public:
    DegenerationEngine(Int gamma, BaseResolvers base, EngineOptions options = {});

    DimensionReport resolve(Int degree, Int multiplicity, Int count);

    /// Builds a single step with all branches resolved, without deciding
    /// whether it certifies.
    DegenerationStep evaluate_step(Int degree, Int multiplicity, Int count, Int c, Int k, Regime regime);

    [[nodiscard]] Int gamma() const { return gamma_; }

private:
    using Key = std::tuple<Int, Int, Int>;

    std::shared_ptr<const TraceNode> node(Int degree, Int multiplicity, Int count);
    std::shared_ptr<const TraceNode> compute(Int degree, Int multiplicity, Int count);
    bool special_branch_admitted(const DegenerationStep& step, Int degree) const;

    Int gamma_;
    BaseResolvers base_;
    EngineOptions options_;
    std::map<Key, std::shared_ptr<const TraceNode>> memo_;
};

/// Validates sys (homogeneous, n = 4^u 9^w with n >= 1) and runs a fresh
/// engine over it. Throws std::invalid_argument on malformed input.
DimensionReport recurse(const K3System& sys, const BaseResolvers& base, EngineOptions options = {});

/// Checks the structural invariants of a whole trace: step combination
/// formulas, l0 = v on NonNegative steps, l0 = -1 on Negative steps,
/// SPECIAL only on single-point leaves. Throws std::logic_error.
void check_trace(const TraceNode& root);

} // namespace k3fat
