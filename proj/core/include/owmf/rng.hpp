#pragma once

#include <cmath>
#include <cstdint>

namespace owmf::rng {

// Counter-based stream built on the splitmix64 output function: word k of
// the stream keyed by `seed` is mix64(seed + (k+1)*GAMMA). Any word can be
// produced independently of the others, which is what makes noise synthesis
// schedule-independent.

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t word(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed + (counter + 1) * kGamma);
}

/// Uniform on [0,1) with 53-bit resolution.
inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform on (0,1]; safe as a log argument.
inline double uniform01_open(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal variate from two stream words (Box-Muller).
inline double normal(std::uint64_t w0, std::uint64_t w1) {
    const double u1 = uniform01_open(w0);
    const double u2 = uniform01(w1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace owmf::rng
