#pragma once

#include <optional>

#include "owmf/image.hpp"

namespace owmf {

/// Restoration quality of one image pair. psnr_db is empty when the images
/// are identical (MSE 0, infinite PSNR).
struct QualityReport {
    double mse = 0.0;
    std::optional<double> psnr_db;
};

/// Mean squared difference over all pixels. Dimensions must match.
double mse(const Image& a, const Image& b);

/// 10 log10(255^2 / MSE); empty optional when MSE is zero.
std::optional<double> psnr(const Image& a, const Image& b);

QualityReport quality(const Image& a, const Image& b);

} // namespace owmf
