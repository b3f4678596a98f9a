#include "k3fat/oracle/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace k3fat::oracle {

namespace {

void enumerate(int nvars, int var, int remaining, Exponents& cur, std::vector<Exponents>& out) {
    if (var == nvars - 1) {
        cur[var] = remaining;
        out.push_back(cur);
        cur[var] = 0;
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[var] = e;
        enumerate(nvars, var + 1, remaining - e, cur, out);
    }
    cur[var] = 0;
}

void require_same_order(const BivariateSeries& a, const BivariateSeries& b) {
    if (a.order() != b.order()) throw std::invalid_argument("series orders differ");
}

} // namespace

std::vector<Exponents> monomials(int nvars, int degree) {
    if (nvars < 1 || nvars > 4) throw std::invalid_argument("monomials: 1 to 4 variables");
    std::vector<Exponents> out;
    if (degree < 0) return out;
    Exponents cur{0, 0, 0, 0};
    enumerate(nvars, 0, degree, cur, out);
    return out;
}

HomogeneousPolynomial::HomogeneousPolynomial(int degree)
    : degree_(degree), terms_(monomials(4, degree)), coeffs_(terms_.size(), 0) {}

Elem& HomogeneousPolynomial::coefficient(const Exponents& e) {
    auto it = std::find(terms_.begin(), terms_.end(), e);
    if (it == terms_.end()) throw std::out_of_range("monomial not of this degree");
    return coeffs_[static_cast<std::size_t>(it - terms_.begin())];
}

Elem HomogeneousPolynomial::evaluate(const PrimeField& f, const std::array<Elem, 4>& point) const {
    Elem acc = 0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        if (coeffs_[t] == 0) continue;
        Elem term = coeffs_[t];
        for (int v = 0; v < 4; ++v) term = f.mul(term, f.pow(point[v], static_cast<std::uint64_t>(terms_[t][v])));
        acc = f.add(acc, term);
    }
    return acc;
}

HomogeneousPolynomial HomogeneousPolynomial::partial(const PrimeField& f, int var) const {
    HomogeneousPolynomial out(std::max(degree_ - 1, 0));
    if (degree_ == 0) return out;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        const int e = terms_[t][var];
        if (e == 0 || coeffs_[t] == 0) continue;
        Exponents lowered = terms_[t];
        --lowered[var];
        Elem& slot = out.coefficient(lowered);
        slot = f.add(slot, f.mul(coeffs_[t], f.from_int(e)));
    }
    return out;
}

BivariateSeries::BivariateSeries(int order)
    : order_(order), coeffs_(static_cast<std::size_t>(order) * static_cast<std::size_t>(order), 0) {
    if (order < 0) throw std::invalid_argument("negative series order");
}

BivariateSeries BivariateSeries::constant(int order, Elem c) {
    BivariateSeries s(order);
    if (order > 0) s.set(0, 0, c);
    return s;
}

BivariateSeries BivariateSeries::variable(int order, int which, Elem c) {
    auto s = constant(order, c);
    if (order > 1) s.set(which == 0 ? 1 : 0, which == 0 ? 0 : 1, 1);
    return s;
}

Elem BivariateSeries::get(int i, int j) const {
    if (i < 0 || j < 0 || i + j >= order_) return 0;
    return coeffs_[index(i, j)];
}

void BivariateSeries::set(int i, int j, Elem v) {
    if (i < 0 || j < 0 || i + j >= order_) throw std::out_of_range("series coefficient beyond truncation");
    coeffs_[index(i, j)] = v;
}

BivariateSeries BivariateSeries::truncated(int order) const {
    BivariateSeries out(order);
    for (int i = 0; i < order; ++i)
        for (int j = 0; i + j < order; ++j) out.coeffs_[out.index(i, j)] = get(i, j);
    return out;
}

bool BivariateSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Elem c) { return c == 0; });
}

namespace series {

BivariateSeries add(const PrimeField& f, const BivariateSeries& a, const BivariateSeries& b) {
    require_same_order(a, b);
    BivariateSeries out(a.order());
    for (int i = 0; i < a.order(); ++i)
        for (int j = 0; i + j < a.order(); ++j) out.set(i, j, f.add(a.get(i, j), b.get(i, j)));
    return out;
}

BivariateSeries sub(const PrimeField& f, const BivariateSeries& a, const BivariateSeries& b) {
    require_same_order(a, b);
    BivariateSeries out(a.order());
    for (int i = 0; i < a.order(); ++i)
        for (int j = 0; i + j < a.order(); ++j) out.set(i, j, f.sub(a.get(i, j), b.get(i, j)));
    return out;
}

BivariateSeries mul(const PrimeField& f, const BivariateSeries& a, const BivariateSeries& b) {
    require_same_order(a, b);
    const int n = a.order();
    BivariateSeries out(n);
    for (int i1 = 0; i1 < n; ++i1) {
        for (int j1 = 0; i1 + j1 < n; ++j1) {
            const Elem x = a.get(i1, j1);
            if (x == 0) continue;
            for (int i2 = 0; i1 + j1 + i2 < n; ++i2) {
                for (int j2 = 0; i1 + j1 + i2 + j2 < n; ++j2) {
                    const Elem y = b.get(i2, j2);
                    if (y == 0) continue;
                    out.set(i1 + i2, j1 + j2, f.add(out.get(i1 + i2, j1 + j2), f.mul(x, y)));
                }
            }
        }
    }
    return out;
}

BivariateSeries scale(const PrimeField& f, const BivariateSeries& a, Elem s) {
    BivariateSeries out(a.order());
    for (int i = 0; i < a.order(); ++i)
        for (int j = 0; i + j < a.order(); ++j) out.set(i, j, f.mul(a.get(i, j), s));
    return out;
}

BivariateSeries inverse(const PrimeField& f, const BivariateSeries& a) {
    const int n = a.order();
    BivariateSeries out(n);
    if (n == 0) return out;
    const Elem a0_inv = f.inv(a.get(0, 0));
    out.set(0, 0, a0_inv);
    // (a * out)_{(i,j)} = 0 for (i,j) != (0,0), solved in order of total degree
    for (int deg = 1; deg < n; ++deg) {
        for (int i = 0; i <= deg; ++i) {
            const int j = deg - i;
            Elem acc = 0;
            for (int i1 = 0; i1 <= i; ++i1)
                for (int j1 = 0; j1 <= j; ++j1) {
                    if (i1 == 0 && j1 == 0) continue;
                    acc = f.add(acc, f.mul(a.get(i1, j1), out.get(i - i1, j - j1)));
                }
            out.set(i, j, f.neg(f.mul(a0_inv, acc)));
        }
    }
    return out;
}

BivariateSeries evaluate(const PrimeField& f, const HomogeneousPolynomial& p,
                         const std::array<BivariateSeries, 4>& coords) {
    const int n = coords[0].order();
    for (const auto& c : coords) require_same_order(coords[0], c);
    std::array<std::vector<BivariateSeries>, 4> powers;
    for (int v = 0; v < 4; ++v) {
        powers[v].push_back(BivariateSeries::constant(n, 1));
        for (int e = 1; e <= p.degree(); ++e) powers[v].push_back(mul(f, powers[v].back(), coords[v]));
    }
    BivariateSeries acc(n);
    const auto& terms = p.terms();
    const auto& coeffs = p.coefficients();
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (coeffs[t] == 0) continue;
        auto term = scale(f, powers[0][terms[t][0]], coeffs[t]);
        for (int v = 1; v < 4; ++v)
            if (terms[t][v] > 0) term = mul(f, term, powers[v][terms[t][v]]);
        acc = add(f, acc, term);
    }
    return acc;
}

} // namespace series

} // namespace k3fat::oracle
