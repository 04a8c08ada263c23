#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace bqsearch {

/// Engine used everywhere. mt19937_64's output sequence is fixed by the
/// standard; the helpers below avoid the library's implementation-defined
/// distributions so seeded runs are reproducible across toolchains.
using Rng = std::mt19937_64;

/// Derives an independent substream seed from a master seed and a unit
/// index (splitmix64 finalizer).
constexpr std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Standard normal via Box-Muller.
inline double standard_normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace bqsearch
