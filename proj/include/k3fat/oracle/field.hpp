#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace k3fat::oracle {

using Elem = std::uint64_t;

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Arithmetic in Z/pZ for an odd prime p < 2^63. Elements are canonical
/// representatives in [0, p).
class PrimeField {
public:
    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p < 3 || p >= (std::uint64_t{1} << 63) || !is_prime(p))
            throw std::invalid_argument("field modulus must be an odd prime below 2^63");
    }

    [[nodiscard]] std::uint64_t modulus() const { return p_; }

    [[nodiscard]] Elem add(Elem a, Elem b) const {
        const Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    [[nodiscard]] Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    [[nodiscard]] Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    [[nodiscard]] Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    [[nodiscard]] Elem pow(Elem a, std::uint64_t e) const {
        Elem r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    /// Throws std::domain_error on zero.
    [[nodiscard]] Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return pow(a, p_ - 2);
    }
    [[nodiscard]] Elem from_int(std::int64_t v) const {
        const auto m = static_cast<std::int64_t>(v % static_cast<std::int64_t>(p_));
        return static_cast<Elem>(m < 0 ? m + static_cast<std::int64_t>(p_) : m);
    }
    template <class Rng>
    Elem random(Rng& rng) const {
        return std::uniform_int_distribution<Elem>(0, p_ - 1)(rng);
    }

private:
    std::uint64_t p_;
};

} // namespace k3fat::oracle
