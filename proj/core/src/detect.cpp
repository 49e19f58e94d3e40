#include "owmf/detect.hpp"

#include <algorithm>
#include <cmath>

namespace owmf {

namespace {

void check_nonnegative_finite(const std::vector<double>& data) {
    for (double v : data) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError("scalar field values must be finite and >= 0");
        }
    }
}

} // namespace

ScalarField::ScalarField(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("scalar field dimensions must be positive");
    }
    if (!std::isfinite(fill) || fill < 0.0) {
        throw ValidationError("scalar field fill must be finite and >= 0");
    }
    data_.assign(value_count(), fill);
}

ScalarField::ScalarField(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("scalar field dimensions must be positive");
    }
    if (data_.size() != value_count()) {
        throw ValidationError("scalar field data length does not match dimensions");
    }
    check_nonnegative_finite(data_);
}

void DetectParams::validate() const {
    if (d < 1) {
        throw ValidationError("detection radius d must be >= 1");
    }
    if (K < 2 || K > neighborhood_count()) {
        throw ValidationError("order count K must satisfy 2 <= K <= " +
                              std::to_string(neighborhood_count()) + " for d=" +
                              std::to_string(d) + ", got " + std::to_string(K));
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be finite and >= 0");
    }
}

ScalarField mirror_extend(const ScalarField& field, int radius) {
    const Image ext = mirror_extend(Image(field.width(), field.height(), field.values()), radius);
    return ScalarField(ext.width(), ext.height(), ext.pixels());
}

namespace {

// Shared ROAD/ROADG sweep; emits the sum of the K smallest absolute
// differences at every pixel. W = (2d+1)^2-1 is at most a few dozen, so the
// per-pixel selection runs on a small stack-backed buffer.
ScalarField k_smallest_diff_sums(const Image& img, int d, int K) {
    const int w = img.width();
    const int h = img.height();
    const Image ext = mirror_extend(img, d);
    const int ew = ext.width();

    const int window = 2 * d + 1;
    const int count = window * window - 1;
    std::vector<double> diffs(count);
    std::vector<double> out(static_cast<std::size_t>(w) * h);

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double center = ext.at(c + d, r + d);
            int n = 0;
            for (int dr = -d; dr <= d; ++dr) {
                const double* row = ext.data() + static_cast<std::size_t>(r + d + dr) * ew;
                for (int dc = -d; dc <= d; ++dc) {
                    if (dr == 0 && dc == 0) {
                        continue;
                    }
                    diffs[n++] = std::abs(row[c + d + dc] - center);
                }
            }
            if (K < count) {
                std::nth_element(diffs.begin(), diffs.begin() + (K - 1), diffs.end());
            }
            // ascending accumulation keeps the sum bit-identical to a
            // full-sort evaluation of the same multiset
            std::sort(diffs.begin(), diffs.begin() + K);
            double sum = 0.0;
            for (int i = 0; i < K; ++i) {
                sum += diffs[i];
            }
            out[static_cast<std::size_t>(r) * w + c] = sum;
        }
    }
    return ScalarField(w, h, std::move(out));
}

} // namespace

ScalarField road_map(const Image& img, int d, int K) {
    DetectParams params;
    params.d = d;
    params.K = K;
    params.validate();
    return k_smallest_diff_sums(img, d, K);
}

ScalarField roadg_map(const Image& img, const DetectParams& params) {
    params.validate();
    ScalarField sums = k_smallest_diff_sums(img, params.d, params.K);
    std::vector<double> out(sums.values());
    const double inv_k = 1.0 / params.K;
    for (double& v : out) {
        v = std::max(v * inv_k - params.sigma, 0.0);
    }
    return ScalarField(sums.width(), sums.height(), std::move(out));
}

ScalarField j_map(const ScalarField& roadg, double H) {
    if (!(H > 0.0) || !std::isfinite(H)) {
        throw ValidationError("J bandwidth H must be finite and > 0");
    }
    std::vector<double> out(roadg.values());
    const double inv_h2 = 1.0 / (H * H);
    for (double& v : out) {
        v = std::exp(-v * v * inv_h2);
    }
    return ScalarField(roadg.width(), roadg.height(), std::move(out));
}

double h1(double p, double sigma) {
    return 5.0 + 30.0 / (1.0 + 20.0 * p) + std::max(sigma - 10.0, 0.0) * (0.5 - p);
}

double h2(double p) {
    return 27.0 - 20.0 * p;
}

} // namespace owmf
