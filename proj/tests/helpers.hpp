#pragma once

#include <set>

#include "rmg/invariance.hpp"
#include "rmg/rng.hpp"

namespace rmg::testhelpers {

// Random degree-<=2 polynomial engineered to be eps-regular for small eps:
// equal-magnitude random-sign coefficients, most mass on the N degree-1
// terms, a capped random pair design for the degree-2 part. A pure degree-2
// polynomial cannot beat sqrt(2/N)-regularity, so the mix is forced.
inline MultilinearPoly make_regular_poly(std::size_t nvars, std::size_t pairs,
                                         double deg2_mass, Rng& rng) {
    MultilinearPoly p;
    p.nvars = nvars;
    const double c1 = std::sqrt((1.0 - deg2_mass) / double(nvars));
    for (uint32_t i = 0; i < nvars; ++i)
        p.terms.push_back({{i}, rng.bit() ? c1 : -c1});

    const double c2 = std::sqrt(deg2_mass / double(pairs));
    std::vector<int> load(nvars, 0);
    std::set<std::pair<uint32_t, uint32_t>> used;
    const int cap = 5;
    std::size_t placed = 0;
    while (placed < pairs) {
        uint32_t a = uint32_t(rng.below(nvars)), b = uint32_t(rng.below(nvars));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (load[a] >= cap || load[b] >= cap) continue;
        if (!used.insert({a, b}).second) continue;
        ++load[a];
        ++load[b];
        p.terms.push_back({{a, b}, rng.bit() ? c2 : -c2});
        ++placed;
    }
    return p;
}

inline MultilinearPoly normalized_sum(std::size_t nvars) {
    MultilinearPoly p;
    p.nvars = nvars;
    const double c = 1.0 / std::sqrt(double(nvars));
    for (uint32_t i = 0; i < nvars; ++i) p.terms.push_back({{i}, c});
    return p;
}

}  // namespace rmg::testhelpers
