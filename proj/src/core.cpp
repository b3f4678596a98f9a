#include "k3fat/core.hpp"

#include <algorithm>

namespace k3fat {

namespace checked {

Int add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in addition");
    return r;
}

Int sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in subtraction");
    return r;
}

Int mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in multiplication");
    return r;
}

} // namespace checked

namespace {

void validate_groups(const std::vector<FatPointGroup>& groups) {
    for (const auto& g : groups) {
        if (g.multiplicity < 1) throw std::invalid_argument("multiplicity must be positive");
        if (g.count < 1) throw std::invalid_argument("point count must be positive");
    }
}

Int sum_conditions(const std::vector<FatPointGroup>& groups) {
    Int total = 0;
    for (const auto& g : groups)
        total = checked::add(total, checked::mul(g.count, point_conditions(g.multiplicity)));
    return total;
}

} // namespace

Int point_conditions(Int multiplicity) {
    // m(m+1) is always even
    return checked::mul(multiplicity, checked::add(multiplicity, 1)) / 2;
}

Int binomial(Int n, Int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    Int r = 1;
    for (Int i = 1; i <= k; ++i) {
        // r * (n - k + i) is divisible by i at every step
        r = checked::mul(r, n - k + i) / i;
    }
    return r;
}

K3System K3System::homogeneous(Int gamma, Int degree, Int multiplicity, Int count) {
    K3System sys{gamma, degree, {}};
    if (count != 0) sys.points.push_back({multiplicity, count});
    return sys;
}

void K3System::validate() const {
    if (gamma < 2) throw std::invalid_argument("gamma must be at least 2");
    if (gamma % 2 != 0) throw std::invalid_argument("gamma must be even");
    if (degree < 1) throw std::invalid_argument("degree must be positive");
    validate_groups(points);
}

Int K3System::point_count() const {
    Int n = 0;
    for (const auto& g : points) n = checked::add(n, g.count);
    return n;
}

bool K3System::is_homogeneous() const {
    return std::all_of(points.begin(), points.end(), [&](const FatPointGroup& g) {
        return g.multiplicity == points.front().multiplicity;
    });
}

Int K3System::multiplicity() const {
    if (points.empty() || !is_homogeneous())
        throw std::invalid_argument("system is not homogeneous with at least one point");
    return points.front().multiplicity;
}

Int K3System::conditions() const { return sum_conditions(points); }

PlanarSystem PlanarSystem::homogeneous(Int degree, Int multiplicity, Int count) {
    PlanarSystem sys{degree, {}};
    if (count != 0) sys.points.push_back({multiplicity, count});
    return sys;
}

void PlanarSystem::validate() const { validate_groups(points); }

Int PlanarSystem::conditions() const { return sum_conditions(points); }

std::string_view to_string(Status s) {
    switch (s) {
    case Status::NonSpecial: return "NONSPECIAL";
    case Status::Special: return "SPECIAL";
    case Status::Unknown: return "UNKNOWN";
    case Status::Conditional: return "CONDITIONAL";
    }
    return "UNKNOWN";
}

Status status_from_string(std::string_view s) {
    if (s == "NONSPECIAL") return Status::NonSpecial;
    if (s == "SPECIAL") return Status::Special;
    if (s == "UNKNOWN") return Status::Unknown;
    if (s == "CONDITIONAL") return Status::Conditional;
    throw std::invalid_argument("unknown status: " + std::string(s));
}

DimensionReport DimensionReport::known(Int vdim, Int dim, Status status) {
    DimensionReport r;
    r.vdim = vdim;
    r.edim = k3fat::edim(vdim);
    r.dim = dim;
    r.status = status;
    return r;
}

DimensionReport DimensionReport::unknown(Int vdim) {
    DimensionReport r;
    r.vdim = vdim;
    r.edim = k3fat::edim(vdim);
    r.status = Status::Unknown;
    return r;
}

void DimensionReport::check_invariants() const {
    if (edim != k3fat::edim(vdim)) throw std::logic_error("report: edim != max(vdim, -1)");
    if (status == Status::Unknown) {
        if (dim) throw std::logic_error("report: UNKNOWN status carries a dimension");
        return;
    }
    if (!dim) throw std::logic_error("report: definite status without a dimension");
    if (*dim < edim) throw std::logic_error("report: dim below expected dimension");
    if (status == Status::NonSpecial && *dim != edim)
        throw std::logic_error("report: NONSPECIAL but dim != edim");
    if (status == Status::Special && *dim == edim)
        throw std::logic_error("report: SPECIAL but dim == edim");
}

Int edim(Int v) { return std::max<Int>(v, -1); }

Int vdim_k3(const K3System& sys) {
    // gamma is even, so gamma d^2 / 2 is exact
    const Int ambient = checked::add(checked::mul(sys.gamma / 2, checked::mul(sys.degree, sys.degree)), 1);
    return checked::sub(ambient, sys.conditions());
}

Int vdim_planar(const PlanarSystem& sys) {
    if (sys.degree < 0) return -1;
    const Int ambient = checked::mul(sys.degree, checked::add(sys.degree, 3)) / 2;
    return checked::sub(ambient, sys.conditions());
}

std::optional<PowerDecomposition> decompose_4u9w(Int n) {
    if (n < 1) return std::nullopt;
    PowerDecomposition p;
    while (n % 4 == 0) {
        n /= 4;
        ++p.u;
    }
    while (n % 9 == 0) {
        n /= 9;
        ++p.w;
    }
    if (n != 1) return std::nullopt;
    return p;
}

} // namespace k3fat
