#include "owmf/noise.hpp"

#include <algorithm>
#include <cmath>

#include "owmf/rng.hpp"

namespace owmf {

namespace {

constexpr std::uint64_t kGaussianTag = 0x6F776D662D676175ull; // "owmf-gau"
constexpr std::uint64_t kImpulseTag = 0x6F776D662D696D70ull;  // "owmf-imp"

} // namespace

void NoiseSpec::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be finite and >= 0");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("impulse probability p must lie in [0,1]");
    }
    if (!std::isfinite(impulse_lo) || !std::isfinite(impulse_hi) ||
        impulse_lo > impulse_hi) {
        throw ValidationError("impulse range requires impulse_lo <= impulse_hi");
    }
}

std::size_t NoisyImage::corrupted_count() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

std::uint64_t gaussian_subseed(std::uint64_t seed) {
    return rng::mix64(seed ^ kGaussianTag);
}

std::uint64_t impulse_subseed(std::uint64_t seed) {
    return rng::mix64(seed ^ kImpulseTag);
}

Image add_gaussian(const Image& img, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be finite and >= 0");
    }
    std::vector<double> out(img.pixels());
    if (sigma > 0.0) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double z = rng::normal(rng::word(seed, 2 * i), rng::word(seed, 2 * i + 1));
            out[i] += sigma * z;
        }
    }
    return Image(img.width(), img.height(), std::move(out));
}

NoisyImage add_impulse(const Image& img, double p, double lo, double hi,
                       std::uint64_t seed) {
    NoiseSpec spec;
    spec.p = p;
    spec.impulse_lo = lo;
    spec.impulse_hi = hi;
    spec.validate();

    std::vector<double> out(img.pixels());
    std::vector<std::uint8_t> mask(out.size(), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng::uniform01(rng::word(seed, 2 * i)) < p) {
            out[i] = lo + (hi - lo) * rng::uniform01(rng::word(seed, 2 * i + 1));
            mask[i] = 1;
        }
    }
    return NoisyImage{Image(img.width(), img.height(), std::move(out)), std::move(mask)};
}

NoisyImage add_mixed(const Image& img, const NoiseSpec& spec) {
    spec.validate();
    const std::uint64_t gseed = gaussian_subseed(spec.seed);
    const std::uint64_t iseed = impulse_subseed(spec.seed);

    std::vector<double> out(img.pixels());
    std::vector<std::uint8_t> mask(out.size(), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng::uniform01(rng::word(iseed, 2 * i)) < spec.p) {
            out[i] = spec.impulse_lo +
                     (spec.impulse_hi - spec.impulse_lo) *
                         rng::uniform01(rng::word(iseed, 2 * i + 1));
            mask[i] = 1;
        } else if (spec.sigma > 0.0) {
            const double z = rng::normal(rng::word(gseed, 2 * i), rng::word(gseed, 2 * i + 1));
            out[i] += spec.sigma * z;
        }
    }
    return NoisyImage{Image(img.width(), img.height(), std::move(out)), std::move(mask)};
}

} // namespace owmf
