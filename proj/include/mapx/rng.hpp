#pragma once

// Deterministic randomness helpers. std::mt19937_64 produces the same stream
// on every platform, but the standard <random> distributions do not, so all
// scaling from raw 64-bit draws is done by hand here.

#include <cmath>
#include <cstdint>
#include <random>

namespace mapx {

using Rng = std::mt19937_64;

// Decorrelated child seed for (seed, lane); splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t lane) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (lane + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform in [0, 1).
inline double next_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), n > 0.
inline std::uint64_t next_below(Rng& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(next_unit(rng) * static_cast<double>(n)) % n;
}

// Uniform integer in [lo, hi] inclusive.
inline std::int64_t next_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline bool next_bernoulli(Rng& rng, double p) {
    return next_unit(rng) < p;
}

// Knuth's product method, splitting large rates into chunks so exp(-lambda)
// never underflows: a Poisson(a + b) draw is the sum of independent
// Poisson(a) and Poisson(b) draws.
inline int next_poisson(Rng& rng, double lambda) {
    int count = 0;
    while (lambda > 500.0) {
        double product = 1.0;
        const double limit = std::exp(-500.0);
        for (product *= next_unit(rng); product > limit; product *= next_unit(rng)) ++count;
        lambda -= 500.0;
    }
    if (lambda <= 0.0) return count;
    const double limit = std::exp(-lambda);
    double product = next_unit(rng);
    while (product > limit) {
        ++count;
        product *= next_unit(rng);
    }
    return count;
}

}  // namespace mapx
