#pragma once

#include "owmf/detect.hpp"
#include "owmf/image.hpp"

namespace owmf {

/// Trilateral filter tuning. The four sigmas shape the spatial, radiometric,
/// impulse, and joint-impulsivity terms; none of them has a universal value,
/// so callers must choose (the bench harness sweeps a small grid and keeps
/// the best score). Detection defaults to the advised d=1, K=4.
struct TrifParams {
    double sigma_s = 0.5;
    double sigma_r = 40.0;
    double sigma_i = 50.0;
    double sigma_j = 50.0;
    int search_radius = 2;
    DetectParams detect{1, 4, 0.0};
    int iterations = 1;

    void validate() const;
};

/// Joint impulsivity of a pixel pair from their ROAD values:
/// exp(-(road_x0 + road_x)^2 / (2 (2 sigma_j)^2)), in (0,1].
double joint_impulsivity(double road_x0, double road_x, double sigma_j);

/// Trilateral filter: normalized average with weights
/// w_s(x) * w_r(x)^J_I * w_i(x)^(1-J_I) over the search window, where w_s is
/// spatial-Gaussian, w_r radiometric and w_i the ROAD-based impulse term.
Image trif_denoise(const Image& img, const TrifParams& params, int threads = 0);

} // namespace owmf
