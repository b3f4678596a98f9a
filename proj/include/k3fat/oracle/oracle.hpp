#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "k3fat/core.hpp"
#include "k3fat/oracle/field.hpp"
#include "k3fat/oracle/polynomial.hpp"
#include "k3fat/oracle/rank.hpp"

namespace k3fat::oracle {

inline constexpr std::uint64_t kDefaultPrime = 2147483647ULL;        // 2^31 - 1
inline constexpr std::uint64_t kSecondPrime = 2305843009213693951ULL; // 2^61 - 1

/// Oracle answers are Monte-Carlo certificates: random points over a large
/// field are generic except with probability about (rows / p) per trial.
struct PrimeFieldConfig {
    std::uint64_t prime = kDefaultPrime;
    std::uint64_t seed = 1;
    int trials = 3;
    /// Refuse condition matrices with more rows than this.
    Int budget_rows = 20000;

    /// prime > 2^30 and prime, trials >= 2, budget_rows >= 1.
    void validate() const;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChartSingular : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SamplingFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    /// Minimum over trials.
    Int dim = -1;
    std::vector<Int> trial_dims;
    /// Trials disagreed.
    bool low_confidence = false;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t prime = 0;
};

struct CrossCheckedResult {
    Int dim = -1;
    OracleResult primary;
    OracleResult secondary;
    /// Either prime's trials disagreed, or the two primes disagree.
    bool low_confidence = false;
};

/// Affine chart w = 1 around a surface point: coordinate `solved` is the
/// series phi in the two local parameters `params` (X for params[0], Y for
/// params[1]). phi(0, 0) is the solved coordinate of the point.
struct LocalChart {
    int solved = 2;
    std::array<int, 2> params{0, 1};
    BivariateSeries phi;
};

struct SurfacePoint {
    std::array<Elem, 4> coords{0, 0, 0, 1};
    Int multiplicity = 1;
    LocalChart chart;
};

struct QuarticSurfaceInstance {
    HomogeneousPolynomial equation;
    std::vector<SurfacePoint> points;
};

/// Solves F(x, y, z, 1) = 0 for the coordinate with the largest index whose
/// partial derivative at P is nonzero, by Newton iteration on truncated
/// series. The result satisfies F = 0 modulo terms of degree > order.
/// P must satisfy F(P) = 0 with P[3] = 1. Throws ChartSingular.
LocalChart expand_local_series(const PrimeField& f, const HomogeneousPolynomial& equation,
                               const std::array<Elem, 4>& point, int order);
/// Same with a fixed solved coordinate in {0, 1, 2}.
LocalChart expand_local_series(const PrimeField& f, const HomogeneousPolynomial& equation,
                               const std::array<Elem, 4>& point, int order, int solved);

/// Random quartic with one random point per requested fat point; each point
/// carries its local series to order multiplicity - 1.
QuarticSurfaceInstance sample_quartic_instance(const PrimeField& f, const std::vector<FatPointGroup>& points,
                                               std::mt19937_64& rng);

/// Rows: coefficients of X^i Y^j, i + j < m, of G(point + local chart) for
/// every point; columns: monomials(4, degree).
Matrix k3_condition_matrix(const PrimeField& f, const QuarticSurfaceInstance& instance, Int degree);

/// Rows: Taylor coefficients of order < m at each affine point (x, y, 1);
/// columns: monomials(3, degree). `points` has one entry per point, in group order.
Matrix planar_condition_matrix(const PrimeField& f, const PlanarSystem& sys,
                               const std::vector<std::pair<Elem, Elem>>& points);

/// C(delta + 2, 2) - rank - 1, minimized over trials; -1 for delta < 0.
OracleResult planar_dim_oracle(const PlanarSystem& sys, const PrimeFieldConfig& cfg);

/// On a random quartic: C(d + 3, 3) - C(d - 1, 3) - rank - 1, minimized over trials.
OracleResult k3_dim_oracle(Int degree, const std::vector<FatPointGroup>& points, const PrimeFieldConfig& cfg);

CrossCheckedResult planar_dim_cross_checked(const PlanarSystem& sys, const PrimeFieldConfig& cfg,
                                            std::uint64_t second_prime = kSecondPrime);
CrossCheckedResult k3_dim_cross_checked(Int degree, const std::vector<FatPointGroup>& points,
                                        const PrimeFieldConfig& cfg, std::uint64_t second_prime = kSecondPrime);

/// splitmix64 chain over the inputs.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

} // namespace k3fat::oracle
