#pragma once

#include <random>
#include <vector>

#include "k3fat/oracle/field.hpp"

namespace k3fat::oracle {

/// Coefficients from the constant term upwards.
using UPoly = std::vector<Elem>;

/// Distinct roots in F_p of a nonzero polynomial, ascending. Uses
/// gcd(f, x^p - x) followed by random equal-degree splitting, so the result
/// does not depend on the rng, only the running time does.
std::vector<Elem> roots(const PrimeField& f, UPoly poly, std::mt19937_64& rng);

} // namespace k3fat::oracle
