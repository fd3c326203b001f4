#pragma once

#include <cmath>
#include <cstdint>

namespace asb::rng {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel shards reproduce the serial
// sequence exactly as long as they agree on the counter assignment.

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = splitmix(seed ^ 0x6a09e667f3bcc909ull);
    h = splitmix(h ^ stream);
    return splitmix(h ^ counter);
}

/// Uniform draw in (0, 1]; the +1 keeps log() of the result finite.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>((hash3(seed, stream, counter) >> 11) + 1) * 0x1p-53;
}

/// Standard normal via Box-Muller; draw `index` consumes counters 2*index, 2*index+1.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const double u1 = uniform01(seed, stream, 2 * index);
    const double u2 = uniform01(seed, stream, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

} // namespace asb::rng
