#pragma once

#include <cstdint>
#include <vector>

#include "owmf/image.hpp"

namespace owmf {

/// Parameters of the mixed Gaussian/impulse degradation model: with
/// probability p a pixel is replaced by a Uniform[impulse_lo, impulse_hi]
/// draw, otherwise zero-mean Gaussian noise of std. dev. sigma is added.
struct NoiseSpec {
    double sigma = 0.0;
    double p = 0.0;
    double impulse_lo = 0.0;
    double impulse_hi = 255.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Noisy image plus the set of impulse-corrupted pixels (1 = corrupted),
/// row-major, same dimensions as the image.
struct NoisyImage {
    Image image;
    std::vector<std::uint8_t> mask;

    std::size_t corrupted_count() const;
};

// Noise synthesis is counter based: each pixel draws from a stream derived
// from (seed, pixel index) alone, so outputs are identical under any
// evaluation order. Gaussian variates come from a Box-Muller transform of
// two 53-bit uniforms per pixel; see rng.hpp for the exact stream.

/// Adds i.i.d. N(0, sigma^2) noise to every pixel. No clamping.
Image add_gaussian(const Image& img, double sigma, std::uint64_t seed);

/// Replaces each pixel independently with probability p by a
/// Uniform[lo, hi] draw; other pixels are untouched.
NoisyImage add_impulse(const Image& img, double p, double lo, double hi,
                       std::uint64_t seed);

/// Mixed model: impulse pixels get a pure Uniform[lo, hi] value (no Gaussian
/// component), all remaining pixels get the Gaussian perturbation.
NoisyImage add_mixed(const Image& img, const NoiseSpec& spec);

/// Sub-seed used by add_mixed for its Gaussian component; exposed so the
/// reduction add_mixed(sigma, p=0) == add_gaussian(sigma, gaussian_subseed)
/// is testable.
std::uint64_t gaussian_subseed(std::uint64_t seed);
/// Sub-seed used by add_mixed for its impulse component.
std::uint64_t impulse_subseed(std::uint64_t seed);

} // namespace owmf
