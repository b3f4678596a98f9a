#include "k3fat/oracle/oracle.hpp"

#include <algorithm>
#include <string>

#include "k3fat/oracle/univariate.hpp"

namespace k3fat::oracle {

namespace {

constexpr int kPointAttempts = 256;
constexpr int kSurfaceAttempts = 64;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t groups_hash(const std::vector<FatPointGroup>& points) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (const auto& g : points) {
        h = splitmix64(h ^ static_cast<std::uint64_t>(g.multiplicity));
        h = splitmix64(h ^ static_cast<std::uint64_t>(g.count));
    }
    return h;
}

void check_budget(Int rows, const PrimeFieldConfig& cfg) {
    if (rows > cfg.budget_rows)
        throw BudgetExceeded("condition matrix needs " + std::to_string(rows) + " rows, budget is " +
                             std::to_string(cfg.budget_rows));
}

OracleResult aggregate(std::vector<Int> dims, std::size_t rows, std::size_t cols, std::uint64_t prime) {
    OracleResult r;
    r.trial_dims = std::move(dims);
    r.dim = *std::min_element(r.trial_dims.begin(), r.trial_dims.end());
    r.low_confidence = std::any_of(r.trial_dims.begin(), r.trial_dims.end(), [&](Int d) { return d != r.dim; });
    r.rows = rows;
    r.cols = cols;
    r.prime = prime;
    return r;
}

CrossCheckedResult combine(OracleResult a, OracleResult b) {
    CrossCheckedResult c;
    c.dim = std::min(a.dim, b.dim);
    c.low_confidence = a.low_confidence || b.low_confidence || a.dim != b.dim;
    c.primary = std::move(a);
    c.secondary = std::move(b);
    return c;
}

/// Coordinate series for a chart; w = 1.
std::array<BivariateSeries, 4> chart_coordinates(const std::array<Elem, 4>& point, const LocalChart& chart,
                                                 int order) {
    std::array<BivariateSeries, 4> coords;
    coords[chart.params[0]] = BivariateSeries::variable(order, 0, point[chart.params[0]]);
    coords[chart.params[1]] = BivariateSeries::variable(order, 1, point[chart.params[1]]);
    coords[chart.solved] = chart.phi.truncated(order);
    coords[3] = BivariateSeries::constant(order, 1);
    return coords;
}

Elem binomial_mod(const std::vector<std::vector<Elem>>& pascal, int n, int k) {
    if (k < 0 || k > n) return 0;
    return pascal[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

std::vector<std::vector<Elem>> pascal_table(const PrimeField& f, int n) {
    std::vector<std::vector<Elem>> t(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        t[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1);
        for (int j = 1; j < i; ++j)
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                f.add(t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)],
                      t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)]);
    }
    return t;
}

} // namespace

void PrimeFieldConfig::validate() const {
    if (prime <= (std::uint64_t{1} << 30)) throw std::invalid_argument("prime must exceed 2^30");
    if (prime >= (std::uint64_t{1} << 63) || !is_prime(prime)) throw std::invalid_argument("prime is not a prime below 2^63");
    if (trials < 2) throw std::invalid_argument("trials must be at least 2");
    if (budget_rows < 1) throw std::invalid_argument("row budget must be positive");
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0;
    for (auto p : parts) h = splitmix64(h ^ p);
    return h;
}

LocalChart expand_local_series(const PrimeField& f, const HomogeneousPolynomial& equation,
                               const std::array<Elem, 4>& point, int order) {
    for (int s = 2; s >= 0; --s) {
        if (equation.partial(f, s).evaluate(f, point) != 0) return expand_local_series(f, equation, point, order, s);
    }
    throw ChartSingular("all affine partial derivatives vanish at the point");
}

LocalChart expand_local_series(const PrimeField& f, const HomogeneousPolynomial& equation,
                               const std::array<Elem, 4>& point, int order, int solved) {
    if (order < 0) throw std::invalid_argument("series order must be non-negative");
    if (solved < 0 || solved > 2) throw std::invalid_argument("solved coordinate must be 0, 1 or 2");
    if (point[3] != 1) throw std::invalid_argument("point must lie in the chart w = 1");
    if (equation.evaluate(f, point) != 0) throw std::invalid_argument("point is not on the surface");
    const auto derivative = equation.partial(f, solved);
    if (derivative.evaluate(f, point) == 0) throw ChartSingular("solved-coordinate partial derivative vanishes");

    LocalChart chart;
    chart.solved = solved;
    int slot = 0;
    for (int v = 0; v < 3; ++v)
        if (v != solved) chart.params[static_cast<std::size_t>(slot++)] = v;

    const int target = order + 1;
    chart.phi = BivariateSeries::constant(target, point[solved]);
    // phi is exact modulo degree >= precision; each Newton step doubles it
    for (int precision = 1; precision < target;) {
        const int next = std::min(2 * precision, target);
        LocalChart current = chart;
        current.phi = chart.phi.truncated(next);
        const auto coords = chart_coordinates(point, current, next);
        const auto value = series::evaluate(f, equation, coords);
        const auto slope = series::evaluate(f, derivative, coords);
        const auto correction = series::mul(f, value, series::inverse(f, slope));
        chart.phi = series::sub(f, current.phi, correction).truncated(target);
        precision = next;
    }
    return chart;
}

QuarticSurfaceInstance sample_quartic_instance(const PrimeField& f, const std::vector<FatPointGroup>& points,
                                               std::mt19937_64& rng) {
    for (int surface_attempt = 0; surface_attempt < kSurfaceAttempts; ++surface_attempt) {
        QuarticSurfaceInstance inst;
        inst.equation = HomogeneousPolynomial::random(f, 4, rng);
        const auto& terms = inst.equation.terms();
        const auto& coeffs = inst.equation.coefficients();
        bool surface_ok = true;
        for (const auto& group : points) {
            for (Int j = 0; j < group.count && surface_ok; ++j) {
                bool placed = false;
                for (int attempt = 0; attempt < kPointAttempts && !placed; ++attempt) {
                    const Elem x = f.random(rng);
                    const Elem y = f.random(rng);
                    // restriction to the line (x, y, t, 1)
                    UPoly restriction(5, 0);
                    for (std::size_t t = 0; t < terms.size(); ++t) {
                        const Elem c = f.mul(coeffs[t], f.mul(f.pow(x, static_cast<std::uint64_t>(terms[t][0])),
                                                              f.pow(y, static_cast<std::uint64_t>(terms[t][1]))));
                        restriction[static_cast<std::size_t>(terms[t][2])] =
                            f.add(restriction[static_cast<std::size_t>(terms[t][2])], c);
                    }
                    if (std::all_of(restriction.begin(), restriction.end(), [](Elem c) { return c == 0; })) continue;
                    const auto zs = roots(f, restriction, rng);
                    if (zs.empty()) continue;
                    const Elem z = zs[std::uniform_int_distribution<std::size_t>(0, zs.size() - 1)(rng)];
                    const std::array<Elem, 4> p{x, y, z, 1};
                    const bool repeated = std::any_of(inst.points.begin(), inst.points.end(),
                                                      [&](const SurfacePoint& q) { return q.coords == p; });
                    if (repeated) continue;
                    try {
                        SurfacePoint sp;
                        sp.coords = p;
                        sp.multiplicity = group.multiplicity;
                        sp.chart = expand_local_series(f, inst.equation, p, static_cast<int>(group.multiplicity) - 1);
                        inst.points.push_back(std::move(sp));
                        placed = true;
                    } catch (const ChartSingular&) {
                        continue;
                    }
                }
                if (!placed) surface_ok = false;
            }
        }
        if (surface_ok) return inst;
    }
    throw SamplingFailed("could not place the requested points on a random quartic");
}

Matrix k3_condition_matrix(const PrimeField& f, const QuarticSurfaceInstance& instance, Int degree) {
    const auto columns = monomials(4, static_cast<int>(degree));
    Matrix m(0, columns.size());
    for (const auto& point : instance.points) {
        const int order = static_cast<int>(point.multiplicity);
        const auto coords = chart_coordinates(point.coords, point.chart, order);
        std::array<std::vector<BivariateSeries>, 4> powers;
        for (int v = 0; v < 4; ++v) {
            powers[v].push_back(BivariateSeries::constant(order, 1));
            for (Int e = 1; e <= degree; ++e) powers[v].push_back(series::mul(f, powers[v].back(), coords[v]));
        }
        std::vector<BivariateSeries> evaluated;
        evaluated.reserve(columns.size());
        for (const auto& mono : columns) {
            auto s = powers[0][static_cast<std::size_t>(mono[0])];
            for (int v = 1; v < 4; ++v)
                if (mono[v] > 0) s = series::mul(f, s, powers[v][static_cast<std::size_t>(mono[v])]);
            evaluated.push_back(std::move(s));
        }
        for (int i = 0; i < order; ++i) {
            for (int j = 0; i + j < order; ++j) {
                std::vector<Elem> row(columns.size());
                for (std::size_t c = 0; c < columns.size(); ++c) row[c] = evaluated[c].get(i, j);
                m.append_row(row);
            }
        }
    }
    return m;
}

Matrix planar_condition_matrix(const PrimeField& f, const PlanarSystem& sys,
                               const std::vector<std::pair<Elem, Elem>>& points) {
    const auto columns = monomials(3, static_cast<int>(sys.degree));
    const auto pascal = pascal_table(f, static_cast<int>(std::max<Int>(sys.degree, 0)));
    Matrix m(0, columns.size());
    std::size_t next = 0;
    for (const auto& group : sys.points) {
        for (Int j = 0; j < group.count; ++j) {
            if (next >= points.size()) throw std::invalid_argument("not enough points for the system");
            const auto [px, py] = points[next++];
            for (Int a = 0; a < group.multiplicity; ++a) {
                for (Int b = 0; a + b < group.multiplicity; ++b) {
                    // coefficient of X^a Y^b in (px + X)^e0 (py + Y)^e1
                    std::vector<Elem> row(columns.size());
                    for (std::size_t c = 0; c < columns.size(); ++c) {
                        const int e0 = columns[c][0];
                        const int e1 = columns[c][1];
                        if (a > e0 || b > e1) continue;
                        row[c] = f.mul(f.mul(binomial_mod(pascal, e0, static_cast<int>(a)),
                                             f.pow(px, static_cast<std::uint64_t>(e0 - a))),
                                       f.mul(binomial_mod(pascal, e1, static_cast<int>(b)),
                                             f.pow(py, static_cast<std::uint64_t>(e1 - b))));
                    }
                    m.append_row(row);
                }
            }
        }
    }
    return m;
}

OracleResult planar_dim_oracle(const PlanarSystem& sys, const PrimeFieldConfig& cfg) {
    cfg.validate();
    sys.validate();
    if (sys.degree < 0) return aggregate(std::vector<Int>(static_cast<std::size_t>(cfg.trials), -1), 0, 0, cfg.prime);
    const Int rows = sys.conditions();
    check_budget(rows, cfg);
    const PrimeField f(cfg.prime);
    const Int ambient = binomial(sys.degree + 2, 2);
    Int npoints = 0;
    for (const auto& g : sys.points) npoints += g.count;

    std::vector<Int> dims;
    std::size_t cols = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937_64 rng(derive_seed({cfg.seed, 0x504c414eULL, static_cast<std::uint64_t>(sys.degree),
                                         groups_hash(sys.points), static_cast<std::uint64_t>(trial)}));
        std::vector<std::pair<Elem, Elem>> pts;
        while (static_cast<Int>(pts.size()) < npoints) {
            std::pair<Elem, Elem> p{f.random(rng), f.random(rng)};
            if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
        }
        auto m = planar_condition_matrix(f, sys, pts);
        cols = m.cols();
        const auto rank = static_cast<Int>(exact_rank(f, std::move(m)));
        dims.push_back(ambient - rank - 1);
    }
    return aggregate(std::move(dims), static_cast<std::size_t>(rows), cols, cfg.prime);
}

OracleResult k3_dim_oracle(Int degree, const std::vector<FatPointGroup>& points, const PrimeFieldConfig& cfg) {
    cfg.validate();
    if (degree < 1) throw std::invalid_argument("degree must be positive");
    K3System{4, degree, points}.validate();
    Int rows = 0;
    for (const auto& g : points) rows = checked::add(rows, checked::mul(g.count, point_conditions(g.multiplicity)));
    check_budget(rows, cfg);

    const PrimeField f(cfg.prime);
    const Int sections = binomial(degree + 3, 3) - binomial(degree - 1, 3);
    std::vector<Int> dims;
    std::size_t cols = 0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937_64 rng(derive_seed({cfg.seed, 0x4b33ULL, static_cast<std::uint64_t>(degree),
                                         groups_hash(points), static_cast<std::uint64_t>(trial)}));
        const auto inst = sample_quartic_instance(f, points, rng);
        auto m = k3_condition_matrix(f, inst, degree);
        cols = m.cols();
        const auto rank = static_cast<Int>(exact_rank(f, std::move(m)));
        dims.push_back(sections - rank - 1);
    }
    return aggregate(std::move(dims), static_cast<std::size_t>(rows), cols, cfg.prime);
}

CrossCheckedResult planar_dim_cross_checked(const PlanarSystem& sys, const PrimeFieldConfig& cfg,
                                            std::uint64_t second_prime) {
    auto second = cfg;
    second.prime = second_prime;
    return combine(planar_dim_oracle(sys, cfg), planar_dim_oracle(sys, second));
}

CrossCheckedResult k3_dim_cross_checked(Int degree, const std::vector<FatPointGroup>& points,
                                        const PrimeFieldConfig& cfg, std::uint64_t second_prime) {
    auto second = cfg;
    second.prime = second_prime;
    return combine(k3_dim_oracle(degree, points, cfg), k3_dim_oracle(degree, points, second));
}

} // namespace k3fat::oracle
