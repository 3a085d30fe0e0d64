#pragma once

#include <cstdint>
#include <random>

namespace cachemix {

// std::mt19937_64 output is fully specified by the standard; the distribution
// adaptors in <random> are not, so draws are done here to keep streams
// identical across standard libraries.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

// uniform in [0, 1)
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// uniform in [0, bound)
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

} // namespace cachemix
