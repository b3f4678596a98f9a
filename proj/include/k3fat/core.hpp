#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace k3fat {

using Int = std::int64_t;

/// Thrown when a dimension count leaves the range of Int.
class ArithmeticOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Checked integer arithmetic. Every dimension count in the library goes
/// through these so an out-of-range input fails loudly instead of wrapping.
namespace checked {
Int add(Int a, Int b);
Int sub(Int a, Int b);
Int mul(Int a, Int b);
} // namespace checked

/// n points of multiplicity m.
struct FatPointGroup {
    Int multiplicity = 1;
    Int count = 1;

    friend bool operator==(const FatPointGroup&, const FatPointGroup&) = default;
};

/// L^gamma(d, m_1^{n_1}, ...) on a generic K3 surface with H^2 = gamma.
struct K3System {
    Int gamma = 4;
    Int degree = 1;
    std::vector<FatPointGroup> points;

    /// L^gamma(d, m^n); n = 0 gives |dH| itself.
    static K3System homogeneous(Int gamma, Int degree, Int multiplicity, Int count);

    /// Throws std::invalid_argument on odd or non-positive gamma, d < 1, or a
    /// malformed point group.
    void validate() const;

    [[nodiscard]] Int point_count() const;
    [[nodiscard]] bool is_homogeneous() const;
    /// Multiplicity of a homogeneous system; throws if not homogeneous or empty.
    [[nodiscard]] Int multiplicity() const;
    [[nodiscard]] Int conditions() const;

    friend bool operator==(const K3System&, const K3System&) = default;
};

/// L(delta, mu^nu) on P^2. delta < 0 is the empty system.
struct PlanarSystem {
    Int degree = 0;
    std::vector<FatPointGroup> points;

    static PlanarSystem homogeneous(Int degree, Int multiplicity, Int count);

    void validate() const;
    [[nodiscard]] Int conditions() const;

    friend bool operator==(const PlanarSystem&, const PlanarSystem&) = default;
};

enum class Status { NonSpecial, Special, Unknown, Conditional };

std::string_view to_string(Status s);
Status status_from_string(std::string_view s);

struct TraceNode;

/// dim is empty exactly when status is Unknown.
struct DimensionReport {
    Int vdim = 0;
    Int edim = 0;
    std::optional<Int> dim;
    Status status = Status::Unknown;
    std::shared_ptr<const TraceNode> trace;
    /// Oracle measurement attached to UNKNOWN reports. Conjectural data, never
    /// used to derive status.
    std::optional<Int> advisory_oracle_dim;
    std::vector<std::string> notes;

    static DimensionReport known(Int vdim, Int dim, Status status);
    static DimensionReport unknown(Int vdim);

    [[nodiscard]] bool definite() const { return dim.has_value(); }
    /// Checks e = max(v, -1), v <= e <= dim and the status/dim correspondence.
    /// Throws std::logic_error on violation.
    void check_invariants() const;
};

Int edim(Int v);

/// v = gamma d^2 / 2 + 1 - sum n_i m_i (m_i + 1) / 2.
Int vdim_k3(const K3System& sys);

/// delta (delta + 3) / 2 - sum n_i m_i (m_i + 1) / 2, and -1 when delta < 0.
Int vdim_planar(const PlanarSystem& sys);

/// m (m + 1) / 2, the number of conditions imposed by one point of multiplicity m.
Int point_conditions(Int multiplicity);

/// Binomial coefficient, zero outside 0 <= k <= n.
Int binomial(Int n, Int k);

/// Exponents (u, w) with n = 4^u 9^w, if any.
struct PowerDecomposition {
    Int u = 0;
    Int w = 0;
};
std::optional<PowerDecomposition> decompose_4u9w(Int n);

} // namespace k3fat
