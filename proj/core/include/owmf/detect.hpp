#pragma once

#include <vector>

#include "owmf/image.hpp"

namespace owmf {

/// Per-pixel map of a nonnegative statistic (ROAD, ROADG, J weights),
/// aligned with the image it was computed from.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int width, int height, double fill = 0.0);
    ScalarField(int width, int height, std::vector<double> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t value_count() const {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    double at(int col, int row) const {
        return data_[static_cast<std::size_t>(row) * width_ + col];
    }
    double& at(int col, int row) {
        return data_[static_cast<std::size_t>(row) * width_ + col];
    }
    const double* data() const { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Impulse detection parameters: deleted-neighborhood radius d, number K of
/// smallest absolute differences to aggregate, and the Gaussian noise level
/// subtracted by ROADG.
struct DetectParams {
    int d = 2;
    int K = 12;
    double sigma = 0.0;

    int neighborhood_count() const { return (2 * d + 1) * (2 * d + 1) - 1; }
    /// True when K equals the full neighborhood size; allowed, but callers
    /// that care about the strict K < card constraint should warn.
    bool k_is_full_window() const { return K == neighborhood_count(); }
    void validate() const;
};

/// Mirror extension of a scalar field, same reflection rule as for images.
ScalarField mirror_extend(const ScalarField& field, int radius);

/// ROAD statistic: at each pixel, the sum of the K smallest absolute
/// intensity differences against the deleted neighborhood of radius d.
/// Borders are resolved by mirroring.
ScalarField road_map(const Image& img, int d, int K);

/// ROADG statistic: the mean of the K smallest absolute differences with the
/// Gaussian level sigma subtracted and clipped at zero.
ScalarField roadg_map(const Image& img, const DetectParams& params);

/// Impulse confidence J = exp(-ROADG^2 / H^2), in (0,1]. Values near 1 mean
/// the pixel is unlikely to be an impulse.
ScalarField j_map(const ScalarField& roadg, double H);

/// Detection bandwidth H1 as a function of impulse probability and Gaussian
/// level: 5 + 30/(1+20p) + (sigma-10)^+ (0.5-p).
double h1(double p, double sigma);

/// Averaging bandwidth H2 = 27 - 20p.
double h2(double p);

} // namespace owmf
