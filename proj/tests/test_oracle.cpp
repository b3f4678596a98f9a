#include <random>
#include <set>

#include "doctest.h"
#include "k3fat/oracle/oracle.hpp"
#include "k3fat/oracle/univariate.hpp"

using namespace k3fat;
using namespace k3fat::oracle;

namespace {

PrimeFieldConfig config(std::uint64_t seed = 1, int trials = 3) {
    PrimeFieldConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    return cfg;
}

std::size_t brute_force_rank(const PrimeField& f, const Matrix& m) {
    // |kernel| = p^(cols - rank)
    std::size_t total = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) total *= f.modulus();
    std::size_t kernel = 0;
    std::vector<Elem> x(m.cols(), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (auto& xi : x) {
            xi = rest % f.modulus();
            rest /= f.modulus();
        }
        bool zero = true;
        for (std::size_t r = 0; r < m.rows() && zero; ++r) {
            Elem s = 0;
            for (std::size_t c = 0; c < m.cols(); ++c) s = f.add(s, f.mul(m(r, c), x[c]));
            zero = s == 0;
        }
        kernel += zero;
    }
    std::size_t nullity = 0;
    while (kernel > 1) {
        kernel /= f.modulus();
        ++nullity;
    }
    return m.cols() - nullity;
}

/// Random quartic moved so that `point` lies on it.
HomogeneousPolynomial quartic_through(const PrimeField& f, const std::array<Elem, 4>& point, std::mt19937_64& rng) {
    auto q = HomogeneousPolynomial::random(f, 4, rng);
    const Elem value = q.evaluate(f, point);
    auto& w4 = q.coefficient({0, 0, 0, 4});
    w4 = f.sub(w4, value);
    return q;
}

} // namespace

TEST_CASE("primality and field arithmetic") {
    CHECK(is_prime(kDefaultPrime));
    CHECK(is_prime(kSecondPrime));
    CHECK_FALSE(is_prime(561));
    CHECK_FALSE(is_prime(3215031751ULL));
    CHECK_THROWS_AS(PrimeField(15), std::invalid_argument);
    const PrimeField f(kDefaultPrime);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const Elem a = f.random(rng);
        if (a == 0) continue;
        CHECK(f.mul(a, f.inv(a)) == 1);
        CHECK(f.add(a, f.neg(a)) == 0);
    }
    CHECK(f.from_int(-1) == kDefaultPrime - 1);
    CHECK_THROWS_AS((void)f.inv(0), std::domain_error);
}

TEST_CASE("exact_rank examples") {
    const PrimeField f(kDefaultPrime);
    CHECK(exact_rank(f, Matrix(4, 6)) == 0);
    for (std::size_t r = 0; r <= 5; ++r) {
        Matrix m(7, 9);
        for (std::size_t i = 0; i < r; ++i) m(i, i) = 1;
        CHECK(exact_rank(f, m) == r);
    }
    std::mt19937_64 rng(4);
    std::vector<std::pair<Elem, Elem>> pts{{f.random(rng), f.random(rng)}, {f.random(rng), f.random(rng)}};
    const auto m = planar_condition_matrix(f, PlanarSystem::homogeneous(2, 2, 2), pts);
    CHECK(m.rows() == 6);
    CHECK(m.cols() == 6);
    CHECK(exact_rank(f, m) == 5);
}

TEST_CASE("exact_rank matches kernel counting over F_5") {
    const PrimeField f(5);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        Matrix m(rng() % 6 + 1, rng() % 6 + 1);
        const bool sparse = trial % 2 == 0;
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = sparse && rng() % 3 ? 0 : f.random(rng);
        CHECK(exact_rank(f, m) == brute_force_rank(f, m));
    }
}

TEST_CASE("univariate roots") {
    const PrimeField f(kDefaultPrime);
    std::mt19937_64 rng(2);
    // (x - 1)(x - 2)(x - 5)^2 (x^2 + 1), p = 3 mod 4 so x^2 + 1 has no roots
    UPoly p{1};
    auto times = [&](const UPoly& g) {
        UPoly out(p.size() + g.size() - 1, 0);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) out[i + j] = f.add(out[i + j], f.mul(p[i], g[j]));
        p = out;
    };
    for (Int r : {1, 2, 5, 5}) times({f.from_int(-r), 1});
    times({1, 0, 1});
    CHECK(roots(f, p, rng) == std::vector<Elem>{1, 2, 5});
    CHECK(roots(f, {1, 0, 1}, rng).empty());
    CHECK(roots(f, {7}, rng).empty());
    CHECK_THROWS_AS(roots(f, {0, 0}, rng), std::invalid_argument);
}

TEST_CASE("local series of an explicit graph") {
    const PrimeField f(kDefaultPrime);
    std::mt19937_64 rng(8);
    // F = z w^3 - q(x, y, w) is the graph z = q(x, y, 1)
    HomogeneousPolynomial surface(4);
    HomogeneousPolynomial q(4);
    for (const auto& e : q.terms())
        if (e[2] == 0) q.coefficient(e) = f.random(rng);
    for (const auto& e : q.terms())
        if (e[2] == 0) surface.coefficient(e) = f.neg(q.coefficient(e));
    surface.coefficient({0, 0, 1, 3}) = 1;
    const Elem px = f.random(rng);
    const Elem py = f.random(rng);
    const std::array<Elem, 4> point{px, py, q.evaluate(f, {px, py, 0, 1}), 1};
    const auto chart = expand_local_series(f, surface, point, 6);
    CHECK(chart.solved == 2);
    // Taylor coefficients of q at (px, py)
    const int order = chart.phi.order();
    const std::array<BivariateSeries, 4> coords{BivariateSeries::variable(order, 0, px),
                                                BivariateSeries::variable(order, 1, py),
                                                BivariateSeries::constant(order, 0),
                                                BivariateSeries::constant(order, 1)};
    CHECK(chart.phi == series::evaluate(f, q, coords));
    CHECK(chart.phi.get(5, 0) == 0);
}

TEST_CASE("local series of the sphere") {
    const PrimeField f(kDefaultPrime);
    HomogeneousPolynomial sphere(2);
    sphere.coefficient({2, 0, 0, 0}) = 1;
    sphere.coefficient({0, 2, 0, 0}) = 1;
    sphere.coefficient({0, 0, 2, 0}) = 1;
    sphere.coefficient({0, 0, 0, 2}) = f.neg(1);
    const auto chart = expand_local_series(f, sphere, {0, 0, 1, 1}, 4, 2);
    // sqrt(1 - X^2 - Y^2) = 1 - X^2/2 - Y^2/2 - X^4/8 - X^2 Y^2/4 - Y^4/8 + ...
    const Elem half = f.inv(2);
    const Elem eighth = f.inv(8);
    const Elem quarter = f.inv(4);
    CHECK(chart.phi.get(0, 0) == 1);
    CHECK(chart.phi.get(1, 0) == 0);
    CHECK(chart.phi.get(0, 1) == 0);
    CHECK(chart.phi.get(2, 0) == f.neg(half));
    CHECK(chart.phi.get(0, 2) == f.neg(half));
    CHECK(chart.phi.get(1, 1) == 0);
    CHECK(chart.phi.get(4, 0) == f.neg(eighth));
    CHECK(chart.phi.get(2, 2) == f.neg(quarter));
    CHECK(chart.phi.get(0, 4) == f.neg(eighth));
    CHECK(chart.phi.get(3, 1) == 0);
    CHECK_THROWS_AS(expand_local_series(f, sphere, {0, 0, 0, 1}, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(expand_local_series(f, sphere, {0, 0, 1, 1}, 2, 0), ChartSingular);
}

TEST_CASE("first-order series is the implicit gradient") {
    const PrimeField f(kDefaultPrime);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const std::array<Elem, 4> point{f.random(rng), f.random(rng), f.random(rng), 1};
        const auto surface = quartic_through(f, point, rng);
        const auto chart = expand_local_series(f, surface, point, 1, 2);
        const Elem fx = surface.partial(f, 0).evaluate(f, point);
        const Elem fy = surface.partial(f, 1).evaluate(f, point);
        const Elem fz_inv = f.inv(surface.partial(f, 2).evaluate(f, point));
        CHECK(chart.phi.get(0, 0) == point[2]);
        CHECK(chart.phi.get(1, 0) == f.neg(f.mul(fx, fz_inv)));
        CHECK(chart.phi.get(0, 1) == f.neg(f.mul(fy, fz_inv)));
    }
}

TEST_CASE("series solve the surface equation to the requested order") {
    const PrimeField f(kDefaultPrime);
    std::mt19937_64 rng(33);
    for (int order : {1, 2, 5, 9}) {
        const std::array<Elem, 4> point{f.random(rng), f.random(rng), f.random(rng), 1};
        const auto surface = quartic_through(f, point, rng);
        const auto chart = expand_local_series(f, surface, point, order);
        const int o = chart.phi.order();
        CHECK(o == order + 1);
        std::array<BivariateSeries, 4> coords{BivariateSeries::variable(o, 0, point[0]),
                                              BivariateSeries::variable(o, 1, point[1]),
                                              BivariateSeries::variable(o, 0, point[2]),
                                              BivariateSeries::constant(o, 1)};
        coords[chart.params[0]] = BivariateSeries::variable(o, 0, point[chart.params[0]]);
        coords[chart.params[1]] = BivariateSeries::variable(o, 1, point[chart.params[1]]);
        coords[chart.solved] = chart.phi;
        CHECK(series::evaluate(f, surface, coords).is_zero());
    }
}

TEST_CASE("series inverse") {
    const PrimeField f(kDefaultPrime);
    std::mt19937_64 rng(6);
    BivariateSeries a(6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; i + j < 6; ++j) a.set(i, j, f.random(rng));
    a.set(0, 0, 3);
    CHECK(series::mul(f, a, series::inverse(f, a)) == BivariateSeries::constant(6, 1));
    a.set(0, 0, 0);
    CHECK_THROWS_AS(series::inverse(f, a), std::domain_error);
}

TEST_CASE("planar oracle examples") {
    CHECK(planar_dim_oracle(PlanarSystem::homogeneous(1, 1, 2), config()).dim == 0);
    CHECK(planar_dim_oracle(PlanarSystem::homogeneous(2, 1, 4), config()).dim == 1);
    CHECK(planar_dim_oracle(PlanarSystem::homogeneous(2, 2, 2), config()).dim == 0);
    CHECK(planar_dim_oracle(PlanarSystem::homogeneous(4, 2, 4), config()).dim == 2);
    CHECK(planar_dim_oracle(PlanarSystem::homogeneous(3, 2, 4), config()).dim == -1);
    CHECK(planar_dim_oracle(PlanarSystem::homogeneous(8, 2, 9), config()).dim == 17);
    CHECK(planar_dim_oracle(PlanarSystem::homogeneous(-2, 1, 1), config()).dim == -1);
    CHECK(planar_dim_oracle(PlanarSystem{5, {}}, config()).dim == 20);
}

TEST_CASE("quartic oracle examples") {
    CHECK(k3_dim_oracle(1, {{1, 1}}, config()).dim == 2);
    CHECK(k3_dim_oracle(1, {{2, 1}}, config()).dim == 0);
    CHECK(k3_dim_oracle(2, {{4, 1}}, config()).dim == 0);
    CHECK(k3_dim_oracle(3, {{6, 1}}, config()).dim == 0);
    CHECK(k3_dim_oracle(3, {{7, 1}}, config()).dim == -1);
    CHECK(k3_dim_oracle(3, {{5, 1}}, config()).dim == 4);
    CHECK(k3_dim_oracle(3, {{1, 9}}, config()).dim == 10);
    CHECK(k3_dim_oracle(3, {{2, 9}}, config()).dim == -1);
    CHECK(k3_dim_oracle(4, {{2, 9}}, config()).dim == 6);
    CHECK(k3_dim_oracle(2, {{2, 4}}, config()).dim == -1);
}

TEST_CASE("quartic oracle without points is the full system") {
    for (Int d = 1; d <= 7; ++d) CHECK(k3_dim_oracle(d, {}, config()).dim == 2 * d * d + 1);
    for (Int delta = 0; delta <= 7; ++delta)
        CHECK(planar_dim_oracle(PlanarSystem{delta, {}}, config()).dim == (delta + 1) * (delta + 2) / 2 - 1);
}

TEST_CASE("oracle is never below vdim or -1 and is monotone in conditions") {
    for (Int d = 1; d <= 4; ++d)
        for (Int m = 1; m <= 4; ++m) {
            Int previous = k3_dim_oracle(d, {}, config()).dim;
            for (Int n = 1; n <= 5; ++n) {
                const Int dim = k3_dim_oracle(d, {{m, n}}, config()).dim;
                CHECK(dim >= -1);
                CHECK(dim >= vdim_k3(K3System::homogeneous(4, d, m, n)));
                CHECK(dim <= previous);
                previous = dim;
            }
            const Int raised = k3_dim_oracle(d, {{m, 1}, {m + 1, 1}}, config()).dim;
            CHECK(raised <= k3_dim_oracle(d, {{m, 2}}, config()).dim);
        }
}

TEST_CASE("more trials never raise the reported dimension") {
    for (Int m = 1; m <= 3; ++m) {
        const Int few = k3_dim_oracle(3, {{m, 4}}, config(5, 2)).dim;
        const Int many = k3_dim_oracle(3, {{m, 4}}, config(5, 6)).dim;
        CHECK(many <= few);
        const auto r = k3_dim_oracle(3, {{m, 4}}, config(5, 6));
        REQUIRE(r.trial_dims.size() == 6);
        CHECK(r.trial_dims[0] == few);
    }
}

TEST_CASE("primes agree and results are reproducible") {
    const auto a = k3_dim_cross_checked(3, {{2, 4}}, config(9));
    CHECK(a.primary.dim == a.secondary.dim);
    CHECK_FALSE(a.low_confidence);
    CHECK(a.primary.prime == kDefaultPrime);
    CHECK(a.secondary.prime == kSecondPrime);
    const auto b = k3_dim_cross_checked(3, {{2, 4}}, config(9));
    CHECK(a.primary.trial_dims == b.primary.trial_dims);
    const auto p = planar_dim_cross_checked(PlanarSystem::homogeneous(5, 2, 4), config());
    CHECK(p.dim == 8);
}

TEST_CASE("sampled instances carry valid charts") {
    const PrimeField f(kDefaultPrime);
    std::mt19937_64 rng(17);
    const auto inst = sample_quartic_instance(f, {{3, 2}, {1, 1}}, rng);
    REQUIRE(inst.points.size() == 3);
    CHECK(inst.points[0].multiplicity == 3);
    CHECK(inst.points[2].multiplicity == 1);
    for (const auto& p : inst.points) {
        CHECK(inst.equation.evaluate(f, p.coords) == 0);
        CHECK(p.coords[3] == 1);
        CHECK(p.chart.phi.order() == p.multiplicity);
    }
    const auto m = k3_condition_matrix(f, inst, 2);
    CHECK(m.rows() == 6 + 6 + 1);
    CHECK(m.cols() == 10);
}

TEST_CASE("oracle configuration and budget") {
    auto cfg = config();
    cfg.trials = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = config();
    cfg.prime = 1000003;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = config();
    cfg.prime = (std::uint64_t{1} << 31);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = config();
    cfg.budget_rows = 20;
    CHECK_THROWS_AS(k3_dim_oracle(3, {{2, 9}}, cfg), BudgetExceeded);
    CHECK_NOTHROW(k3_dim_oracle(3, {{2, 4}}, cfg));
}

TEST_CASE("derived seeds do not collide on small inputs") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a)
        for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed({a, b}));
    CHECK(seen.size() == 400);
    CHECK(derive_seed({1, 2}) == derive_seed({1, 2}));
}
