#include "owmf/trilateral.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace owmf {

void TrifParams::validate() const {
    if (!(sigma_s > 0.0) || !(sigma_r > 0.0) || !(sigma_i > 0.0) || !(sigma_j > 0.0)) {
        throw ValidationError("all trilateral sigmas must be > 0");
    }
    if (search_radius < 1) {
        throw ValidationError("search radius must be >= 1");
    }
    DetectParams det = detect;
    det.sigma = 0.0;
    det.validate();
    if (iterations < 1) {
        throw ValidationError("iterations must be >= 1");
    }
}

double joint_impulsivity(double road_x0, double road_x, double sigma_j) {
    if (!(sigma_j > 0.0)) {
        throw ValidationError("sigma_j must be > 0");
    }
    const double s = road_x0 + road_x;
    const double denom = 2.0 * (2.0 * sigma_j) * (2.0 * sigma_j);
    return std::exp(-s * s / denom);
}

namespace {

Image trif_pass(const Image& img, const TrifParams& p, int threads) {
    const ScalarField road = road_map(img, p.detect.d, p.detect.K);

    const int w = img.width();
    const int h = img.height();
    const int sr = p.search_radius;
    const Image ext = mirror_extend(img, sr);
    const ScalarField roade = mirror_extend(road, sr);
    const int ew = ext.width();

    // spatial term depends only on the offset
    const int side = 2 * sr + 1;
    std::vector<double> log_ws(static_cast<std::size_t>(side) * side);
    {
        std::size_t i = 0;
        for (int dr = -sr; dr <= sr; ++dr) {
            for (int dc = -sr; dc <= sr; ++dc) {
                const double r2 = static_cast<double>(dc) * dc + static_cast<double>(dr) * dr;
                log_ws[i++] = -r2 / (2.0 * p.sigma_s * p.sigma_s);
            }
        }
    }

    const double inv_2sr2 = 1.0 / (2.0 * p.sigma_r * p.sigma_r);
    const double inv_2si2 = 1.0 / (2.0 * p.sigma_i * p.sigma_i);
    const double inv_2sj2 = 1.0 / (2.0 * (2.0 * p.sigma_j) * (2.0 * p.sigma_j));
    std::vector<double> out(static_cast<std::size_t>(w) * h);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(threads > 0 ? threads : omp_get_max_threads())
#else
    (void)threads;
#endif
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double y0 = ext.at(c + sr, r + sr);
            const double road0 = roade.at(c + sr, r + sr);
            double acc = 0.0;
            double wsum = 0.0;
            std::size_t k = 0;
            for (int dr = -sr; dr <= sr; ++dr) {
                const std::size_t row = static_cast<std::size_t>(r + sr + dr) * ew;
                for (int dc = -sr; dc <= sr; ++dc, ++k) {
                    const double y = ext.data()[row + (c + sr + dc)];
                    const double rd = roade.data()[row + (c + sr + dc)];
                    const double s = road0 + rd;
                    const double ji = std::exp(-s * s * inv_2sj2);
                    const double dy = y - y0;
                    // w_s * w_r^ji * w_i^(1-ji), evaluated in log space
                    const double wgt = std::exp(log_ws[k] - ji * dy * dy * inv_2sr2 -
                                                (1.0 - ji) * rd * rd * inv_2si2);
                    acc += wgt * y;
                    wsum += wgt;
                }
            }
            out[static_cast<std::size_t>(r) * w + c] = acc / wsum;
        }
    }
    return Image(w, h, std::move(out));
}

} // namespace

Image trif_denoise(const Image& img, const TrifParams& params, int threads) {
    params.validate();
    Image current = img;
    for (int pass = 0; pass < params.iterations; ++pass) {
        current = trif_pass(current, params, threads);
    }
    return current;
}

} // namespace owmf
