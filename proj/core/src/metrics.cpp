#include "owmf/metrics.hpp"

#include <cmath>

namespace owmf {

double mse(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ValidationError("MSE requires equal dimensions, got " +
                              std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                              " vs " + std::to_string(b.width()) + "x" +
                              std::to_string(b.height()));
    }
    const double* pa = a.data();
    const double* pb = b.data();
    const std::size_t n = a.pixel_count();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = pa[i] - pb[i];
        sum += d * d;
    }
    return sum / static_cast<double>(n);
}

std::optional<double> psnr(const Image& a, const Image& b) {
    const double m = mse(a, b);
    if (m == 0.0) {
        return std::nullopt;
    }
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

QualityReport quality(const Image& a, const Image& b) {
    QualityReport q;
    q.mse = mse(a, b);
    q.psnr_db = q.mse == 0.0 ? std::nullopt : std::optional<double>(10.0 * std::log10(65025.0 / q.mse));
    return q;
}

} // namespace owmf
