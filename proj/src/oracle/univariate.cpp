#include "k3fat/oracle/univariate.hpp"

#include <algorithm>
#include <stdexcept>

namespace k3fat::oracle {

namespace {

void trim(UPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

UPoly make_monic(const PrimeField& f, UPoly p) {
    trim(p);
    if (p.empty()) return p;
    const Elem lead_inv = f.inv(p.back());
    for (auto& c : p) c = f.mul(c, lead_inv);
    return p;
}

UPoly mod(const PrimeField& f, UPoly a, const UPoly& m) {
    trim(a);
    const int dm = degree(m);
    const Elem lead_inv = f.inv(m.back());
    while (degree(a) >= dm) {
        const Elem q = f.mul(a.back(), lead_inv);
        const int shift = degree(a) - dm;
        for (int i = 0; i <= dm; ++i) a[shift + i] = f.sub(a[shift + i], f.mul(q, m[i]));
        trim(a);
    }
    return a;
}

UPoly mulmod(const PrimeField& f, const UPoly& a, const UPoly& b, const UPoly& m) {
    if (a.empty() || b.empty()) return {};
    UPoly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
    return mod(f, std::move(out), m);
}

UPoly powmod(const PrimeField& f, UPoly base, std::uint64_t e, const UPoly& m) {
    UPoly r = mod(f, {1}, m);
    base = mod(f, std::move(base), m);
    while (e) {
        if (e & 1) r = mulmod(f, r, base, m);
        base = mulmod(f, base, base, m);
        e >>= 1;
    }
    return r;
}

UPoly gcd(const PrimeField& f, UPoly a, UPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = mod(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(f, std::move(a));
}

/// g monic, squarefree, product of distinct linear factors.
void split(const PrimeField& f, const UPoly& g, std::mt19937_64& rng, std::vector<Elem>& out) {
    if (degree(g) <= 0) return;
    if (degree(g) == 1) {
        out.push_back(f.neg(g[0]));
        return;
    }
    const std::uint64_t half = (f.modulus() - 1) / 2;
    for (;;) {
        const Elem a = f.random(rng);
        auto t = powmod(f, UPoly{a, 1}, half, g);
        if (t.empty()) t = {0};
        t[0] = f.sub(t[0], 1);
        auto h = gcd(f, g, t);
        if (degree(h) > 0 && degree(h) < degree(g)) {
            split(f, h, rng, out);
            // g / h by long division
            UPoly q(static_cast<std::size_t>(degree(g) - degree(h) + 1), 0);
            UPoly rem = g;
            for (int i = degree(rem) - degree(h); i >= 0; --i) {
                const Elem c = rem[static_cast<std::size_t>(i + degree(h))];
                q[static_cast<std::size_t>(i)] = c;
                for (int j = 0; j <= degree(h); ++j)
                    rem[static_cast<std::size_t>(i + j)] = f.sub(rem[static_cast<std::size_t>(i + j)], f.mul(c, h[j]));
            }
            split(f, q, rng, out);
            return;
        }
    }
}

} // namespace

std::vector<Elem> roots(const PrimeField& f, UPoly poly, std::mt19937_64& rng) {
    poly = make_monic(f, std::move(poly));
    if (poly.empty()) throw std::invalid_argument("roots of the zero polynomial");
    std::vector<Elem> out;
    if (degree(poly) == 0) return out;
    auto xp = powmod(f, UPoly{0, 1}, f.modulus(), poly);
    xp.resize(std::max<std::size_t>(xp.size(), 2), 0);
    xp[1] = f.sub(xp[1], 1);
    const auto g = gcd(f, poly, xp);
    split(f, g, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace k3fat::oracle
