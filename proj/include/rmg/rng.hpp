#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "rmg/errors.hpp"

namespace rmg {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seeded generator with deterministic sampling helpers. Parallel code must
// use split(worker_index) so results do not depend on scheduling.
class Rng {
  public:
    explicit Rng(uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

    uint64_t seed() const { return seed_; }
    Rng split(uint64_t stream) const {
        return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x51ed2701)));
    }

    uint64_t u64() { return eng_(); }

    // Unbiased integer in [0, n).
    uint64_t below(uint64_t n) {
        uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            uint64_t r = u64();
            if (r >= threshold) return r % n;
        }
    }

    bool bit() { return u64() >> 63; }

    double unit() { return double(u64() >> 11) * 0x1p-53; }

    double normal() {
        if (have_spare_) { have_spare_ = false; return spare_; }
        double u, v, s;
        do {
            u = 2.0 * unit() - 1.0;
            v = 2.0 * unit() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // Exact Poisson sampling; large means are split by additivity to avoid
    // underflow in the product method.
    uint64_t poisson(double mean) {
        if (mean < 0) throw PreconditionError("poisson mean must be >= 0");
        if (mean == 0) return 0;
        if (mean > 30.0) return poisson(mean / 2) + poisson(mean / 2);
        double limit = std::exp(-mean), prod = unit();
        uint64_t k = 0;
        while (prod > limit) { prod *= unit(); ++k; }
        return k;
    }

  private:
    uint64_t seed_;
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

}  // namespace rmg
