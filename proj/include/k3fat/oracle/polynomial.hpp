#pragma once

#include <array>
#include <vector>

#include "k3fat/oracle/field.hpp"

namespace k3fat::oracle {

/// Exponent vector over at most four variables (x, y, z, w); unused slots are zero.
using Exponents = std::array<int, 4>;

/// All exponent vectors of total degree `degree` in the first `nvars`
/// variables, ordered lexicographically from x^degree downwards.
std::vector<Exponents> monomials(int nvars, int degree);

/// Dense homogeneous polynomial in four variables over a prime field,
/// coefficients aligned with monomials(4, degree).
class HomogeneousPolynomial {
public:
    HomogeneousPolynomial() = default;
    explicit HomogeneousPolynomial(int degree);

    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] const std::vector<Exponents>& terms() const { return terms_; }
    [[nodiscard]] std::vector<Elem>& coefficients() { return coeffs_; }
    [[nodiscard]] const std::vector<Elem>& coefficients() const { return coeffs_; }
    /// Coefficient slot of a monomial; throws std::out_of_range if absent.
    Elem& coefficient(const Exponents& e);

    [[nodiscard]] Elem evaluate(const PrimeField& f, const std::array<Elem, 4>& point) const;
    [[nodiscard]] HomogeneousPolynomial partial(const PrimeField& f, int var) const;

    template <class Rng>
    static HomogeneousPolynomial random(const PrimeField& f, int degree, Rng& rng) {
        HomogeneousPolynomial p(degree);
        for (auto& c : p.coeffs_) c = f.random(rng);
        return p;
    }

private:
    int degree_ = 0;
    std::vector<Exponents> terms_;
    std::vector<Elem> coeffs_;
};

/// Bivariate power series in local parameters (X, Y) truncated at total
/// degree < order: only coefficients of X^i Y^j with i + j < order are kept.
class BivariateSeries {
public:
    BivariateSeries() = default;
    explicit BivariateSeries(int order);

    static BivariateSeries constant(int order, Elem c);
    /// c + X (which = 0) or c + Y (which = 1).
    static BivariateSeries variable(int order, int which, Elem c);

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] Elem get(int i, int j) const;
    void set(int i, int j, Elem v);
    [[nodiscard]] BivariateSeries truncated(int order) const;
    [[nodiscard]] bool is_zero() const;

    friend bool operator==(const BivariateSeries&, const BivariateSeries&) = default;

private:
    [[nodiscard]] std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * order_ + j; }

    int order_ = 0;
    std::vector<Elem> coeffs_;
};

namespace series {
BivariateSeries add(const PrimeField& f, const BivariateSeries& a, const BivariateSeries& b);
BivariateSeries sub(const PrimeField& f, const BivariateSeries& a, const BivariateSeries& b);
BivariateSeries mul(const PrimeField& f, const BivariateSeries& a, const BivariateSeries& b);
BivariateSeries scale(const PrimeField& f, const BivariateSeries& a, Elem s);
/// Multiplicative inverse; throws std::domain_error when the constant term is zero.
BivariateSeries inverse(const PrimeField& f, const BivariateSeries& a);
/// p evaluated at four coordinate series, all of the same order.
BivariateSeries evaluate(const PrimeField& f, const HomogeneousPolynomial& p,
                         const std::array<BivariateSeries, 4>& coords);
} // namespace series

} // namespace k3fat::oracle
