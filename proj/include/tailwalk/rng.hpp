#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tailwalk {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent generator for substream `stream` of `seed`. Work is always
/// split into fixed substreams (paths chunks, branching runs), never per
/// worker, so the thread count cannot change any sample.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng{splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))};
}

/// Uniform on the open interval (0, 1); 53 random bits.
inline double uniform_open(Rng& rng) {
    for (;;) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

inline double standard_exponential(Rng& rng) { return -std::log(uniform_open(rng)); }

/// Standard normal by Box-Muller, one draw per call (no cached state).
inline double standard_normal(Rng& rng) {
    const double u = uniform_open(rng);
    const double v = uniform_open(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace tailwalk
