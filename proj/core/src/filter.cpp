#include "owmf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace owmf {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

int checked_mirror(int i, int n) {
    if (n > 1 && (i < -(n - 1) || i > 2 * (n - 1))) {
        throw ValidationError("coordinate " + std::to_string(i) +
                              " not resolvable by a single mirror fold on axis of size " +
                              std::to_string(n));
    }
    return mirror_index(i, n);
}

double mirrored_at(const Image& img, PixelCoord p) {
    return img.at(checked_mirror(p.col, img.width()), checked_mirror(p.row, img.height()));
}

double mirrored_at(const ScalarField& f, PixelCoord p) {
    return f.at(checked_mirror(p.col, f.width()), checked_mirror(p.row, f.height()));
}

double triangular(double t) {
    return std::max(1.0 - std::abs(t), 0.0);
}

// Row-major kappa weights over patch offsets in [-eta, eta]^2.
std::vector<double> make_kappa_table(PatchKernel kernel, int eta, double gauss_bandwidth,
                                     double* sum_out) {
    const int span = 2 * eta + 1;
    std::vector<double> table(static_cast<std::size_t>(span) * span);
    std::size_t i = 0;
    for (int dr = -eta; dr <= eta; ++dr) {
        for (int dc = -eta; dc <= eta; ++dc) {
            double v = 1.0;
            switch (kernel) {
            case PatchKernel::kappa0:
                v = kappa0_weight(std::max(std::abs(dr), std::abs(dc)), eta);
                break;
            case PatchKernel::gaussian:
                v = kappa_gauss({dc, dr}, gauss_bandwidth);
                break;
            case PatchKernel::uniform:
                v = 1.0;
                break;
            }
            table[i++] = v;
        }
    }
    double sum = 0.0;
    for (double v : table) {
        sum += v;
    }
    if (sum_out != nullptr) {
        *sum_out = sum;
    }
    return table;
}

// Sorted-prefix bandwidth solve. rho must be ascending. Returns false when
// every rho is zero (the infinite-bandwidth case).
bool remark_bandwidth_sorted(const double* rho, int n, double sigma2, double* a_out) {
    double s1 = 0.0;
    double s2 = 0.0;
    double a = 0.0;
    bool finite = false;
    for (int k = 0; k < n; ++k) {
        const double r = rho[k];
        s1 += r;
        s2 += r * r;
        if (s1 > 0.0) {
            const double ak = (sigma2 + s2) / s1;
            if (ak >= r) {
                a = ak;
                finite = true;
            } else {
                break;
            }
        }
    }
    *a_out = a;
    return finite;
}

double resolved_h1(const OwmfParams& params, double p_hint, double sigma) {
    const double v = params.H1 ? *params.H1 : h1(p_hint, sigma);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError("H1 must be > 0; got " + std::to_string(v) +
                              " (supply --H1 explicitly for this p/sigma combination)");
    }
    return v;
}

double resolved_h2(const OwmfParams& params, double p_hint) {
    const double v = params.H2 ? *params.H2 : h2(p_hint);
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError("H2 must be > 0; got " + std::to_string(v));
    }
    return v;
}

void check_sigma(double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be finite and >= 0");
    }
}

// One full OWMF pass: ROADG, J maps, per-pixel weighted profiles and the
// bandwidth-driven average. Candidate and patch accumulation are row-major,
// so outputs are independent of the thread count.
Image owmf_pass(const Image& img, double sigma, double h1_value, double h2_value,
                const OwmfParams& params, int threads) {
    DetectParams det = params.detect;
    det.sigma = sigma;
    const ScalarField roadg = roadg_map(img, det);
    const ScalarField j1 = j_map(roadg, h1_value);
    const ScalarField j2 = j_map(roadg, h2_value);

    const int w = img.width();
    const int h = img.height();
    const int sr = params.window.search_radius;
    const int eta = params.window.patch_radius;
    const int R = sr + eta;
    const Image ext = mirror_extend(img, R);
    const ScalarField j1e = mirror_extend(j1, R);
    const ScalarField j2e = mirror_extend(j2, R);
    const int ew = ext.width();

    const int span = 2 * eta + 1;
    const int m = span * span;
    const int M = params.window.search_count();
    double kappa_sum = 0.0;
    const std::vector<double> kappa =
        make_kappa_table(params.patch_kernel, eta, params.gauss_bandwidth, &kappa_sum);

    const double sub = kSqrt2 * sigma;
    const double sigma2 = sigma * sigma;
    const bool jnorm = params.j_weighted_normalizer;
    std::vector<double> out(static_cast<std::size_t>(w) * h);

#ifdef _OPENMP
#pragma omp parallel num_threads(resolve_threads(threads))
#else
    (void)threads;
#endif
    {
        std::vector<double> rho(M);
        std::vector<double> sorted(M);
        std::vector<double> center_jk(m);
#ifdef _OPENMP
#pragma omp for schedule(dynamic)
#endif
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                // kappa(offset) * J1(x0+offset), shared by all candidates
                int mi = 0;
                for (int dr = -eta; dr <= eta; ++dr) {
                    const double* jc =
                        j1e.data() + static_cast<std::size_t>(r + R + dr) * ew + (c + R - eta);
                    for (int i = 0; i < span; ++i, ++mi) {
                        center_jk[mi] = kappa[mi] * jc[i];
                    }
                }

                int idx = 0;
                for (int ur = -sr; ur <= sr; ++ur) {
                    for (int uc = -sr; uc <= sr; ++uc) {
                        double ss = 0.0;
                        double nn = 0.0;
                        mi = 0;
                        for (int dr = -eta; dr <= eta; ++dr) {
                            const std::size_t row0 = static_cast<std::size_t>(r + R + dr) * ew;
                            const std::size_t row1 = static_cast<std::size_t>(r + R + ur + dr) * ew;
                            const double* a = ext.data() + row0 + (c + R - eta);
                            const double* b = ext.data() + row1 + (c + R + uc - eta);
                            const double* jb = j1e.data() + row1 + (c + R + uc - eta);
                            const double* cjk = center_jk.data() + mi;
                            if (jnorm) {
                                for (int i = 0; i < span; ++i) {
                                    const double t = a[i] - b[i];
                                    const double q = cjk[i] * jb[i];
                                    ss += q * t * t;
                                    nn += q;
                                }
                            } else {
                                for (int i = 0; i < span; ++i) {
                                    const double t = a[i] - b[i];
                                    ss += cjk[i] * jb[i] * t * t;
                                }
                            }
                            mi += span;
                        }
                        const double dist = std::sqrt(ss / (jnorm ? nn : kappa_sum));
                        rho[idx++] = std::max(dist - sub, 0.0);
                    }
                }

                std::copy(rho.begin(), rho.end(), sorted.begin());
                std::sort(sorted.begin(), sorted.end());
                double a_hat = 0.0;
                const bool finite = remark_bandwidth_sorted(sorted.data(), M, sigma2, &a_hat);
                const double inv_a = finite ? 1.0 / a_hat : 0.0;

                double acc = 0.0;
                double wsum = 0.0;
                idx = 0;
                for (int ur = -sr; ur <= sr; ++ur) {
                    const std::size_t row = static_cast<std::size_t>(r + R + ur) * ew;
                    for (int uc = -sr; uc <= sr; ++uc, ++idx) {
                        const double tri = finite ? triangular(rho[idx] * inv_a) : 1.0;
                        const double wgt = j2e.data()[row + (c + R + uc)] * tri;
                        acc += wgt * ext.data()[row + (c + R + uc)];
                        wsum += wgt;
                    }
                }
                out[static_cast<std::size_t>(r) * w + c] = acc / wsum;
            }
        }
    }
    return Image(w, h, std::move(out));
}

} // namespace

void OwmfParams::validate() const {
    window.validate();
    DetectParams det = detect;
    det.sigma = 0.0; // the runtime sigma replaces this field
    det.validate();
    if (iterations < 1 || iterations > 5) {
        throw ValidationError("iterations must lie in [1,5]");
    }
    if (patch_kernel == PatchKernel::gaussian &&
        (!(gauss_bandwidth > 0.0) || !std::isfinite(gauss_bandwidth))) {
        throw ValidationError("gaussian patch kernel requires bandwidth > 0");
    }
}

double patch_distance(const Image& img, PixelCoord x, PixelCoord x0, int eta) {
    if (eta < 0) {
        throw ValidationError("patch radius must be >= 0");
    }
    const int m = (2 * eta + 1) * (2 * eta + 1);
    double ss = 0.0;
    for (int dr = -eta; dr <= eta; ++dr) {
        for (int dc = -eta; dc <= eta; ++dc) {
            const double t = mirrored_at(img, {x.col + dc, x.row + dr}) -
                             mirrored_at(img, {x0.col + dc, x0.row + dr});
            ss += t * t;
        }
    }
    return std::sqrt(ss / m);
}

double rho_plain(double dist, double sigma) {
    return std::max(dist - kSqrt2 * sigma, 0.0);
}

double kappa0_weight(int j, int eta) {
    if (eta < 1) {
        throw ValidationError("kappa0 requires patch radius >= 1");
    }
    if (j < 0 || j > eta) {
        throw ValidationError("kappa0 offset norm " + std::to_string(j) +
                              " outside [0," + std::to_string(eta) + "]");
    }
    double sum = 0.0;
    for (int k = std::max(1, j); k <= eta; ++k) {
        const double side = 2.0 * k + 1.0;
        sum += 1.0 / (side * side);
    }
    return sum;
}

double kappa_gauss(PixelCoord offset, double h_g) {
    if (!(h_g > 0.0) || !std::isfinite(h_g)) {
        throw ValidationError("gaussian kernel bandwidth must be > 0");
    }
    const double r2 = static_cast<double>(offset.col) * offset.col +
                      static_cast<double>(offset.row) * offset.row;
    return std::exp(-r2 / (2.0 * h_g));
}

double weighted_patch_distance(const Image& img, const ScalarField& jmap,
                               PixelCoord x, PixelCoord x0, const OwmfParams& params) {
    if (jmap.width() != img.width() || jmap.height() != img.height()) {
        throw ValidationError("J map dimensions must match the image");
    }
    const int eta = params.window.patch_radius;
    double kappa_sum = 0.0;
    const std::vector<double> kappa =
        make_kappa_table(params.patch_kernel, eta, params.gauss_bandwidth, &kappa_sum);

    double num = 0.0;
    double norm = 0.0;
    std::size_t mi = 0;
    for (int dr = -eta; dr <= eta; ++dr) {
        for (int dc = -eta; dc <= eta; ++dc, ++mi) {
            const PixelCoord ya{x.col + dc, x.row + dr};
            const PixelCoord yb{x0.col + dc, x0.row + dr};
            const double q = kappa[mi] * mirrored_at(jmap, ya) * mirrored_at(jmap, yb);
            const double t = mirrored_at(img, ya) - mirrored_at(img, yb);
            num += q * t * t;
            norm += q;
        }
    }
    return std::sqrt(num / (params.j_weighted_normalizer ? norm : kappa_sum));
}

double rho_weighted(const Image& img, const ScalarField& jmap, PixelCoord x,
                    PixelCoord x0, const OwmfParams& params) {
    return std::max(weighted_patch_distance(img, jmap, x, x0, params) -
                        kSqrt2 * params.detect.sigma,
                    0.0);
}

std::optional<double> solve_bandwidth(std::span<const double> rhos, double sigma) {
    if (rhos.empty()) {
        throw ValidationError("bandwidth solve needs at least one rho value");
    }
    check_sigma(sigma);
    for (double r : rhos) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw ValidationError("rho values must be finite and >= 0");
        }
    }
    std::vector<double> sorted(rhos.begin(), rhos.end());
    std::sort(sorted.begin(), sorted.end());
    double a = 0.0;
    if (!remark_bandwidth_sorted(sorted.data(), static_cast<int>(sorted.size()),
                                 sigma * sigma, &a)) {
        return std::nullopt;
    }
    return a;
}

RhoProfile owf_rho_profile(const Image& img, double sigma, const WindowSpec& window,
                           PixelCoord x0) {
    window.validate();
    check_sigma(sigma);
    RhoProfile profile;
    profile.center = x0;
    for (PixelCoord cand : window_coords(x0, window.search_radius)) {
        profile.entries.push_back(
            {cand, rho_plain(patch_distance(img, cand, x0, window.patch_radius), sigma)});
    }
    std::stable_sort(profile.entries.begin(), profile.entries.end(),
                     [](const RhoEntry& a, const RhoEntry& b) { return a.rho < b.rho; });
    return profile;
}

RhoProfile owmf_rho_profile(const Image& img, const ScalarField& j1,
                            const OwmfParams& params, PixelCoord x0) {
    params.validate();
    RhoProfile profile;
    profile.center = x0;
    for (PixelCoord cand : window_coords(x0, params.window.search_radius)) {
        profile.entries.push_back({cand, rho_weighted(img, j1, cand, x0, params)});
    }
    std::stable_sort(profile.entries.begin(), profile.entries.end(),
                     [](const RhoEntry& a, const RhoEntry& b) { return a.rho < b.rho; });
    return profile;
}

Image owf_denoise(const Image& img, double sigma, const WindowSpec& window, int threads) {
    window.validate();
    check_sigma(sigma);

    const int w = img.width();
    const int h = img.height();
    const int sr = window.search_radius;
    const int eta = window.patch_radius;
    const int R = sr + eta;
    const Image ext = mirror_extend(img, R);
    const int ew = ext.width();

    const int span = 2 * eta + 1;
    const int M = window.search_count();
    const double inv_m = 1.0 / window.patch_count();
    const double sub = kSqrt2 * sigma;
    const double sigma2 = sigma * sigma;
    std::vector<double> out(static_cast<std::size_t>(w) * h);

#ifdef _OPENMP
#pragma omp parallel num_threads(resolve_threads(threads))
#else
    (void)threads;
#endif
    {
        std::vector<double> rho(M);
        std::vector<double> sorted(M);
#ifdef _OPENMP
#pragma omp for schedule(dynamic)
#endif
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                int idx = 0;
                for (int ur = -sr; ur <= sr; ++ur) {
                    for (int uc = -sr; uc <= sr; ++uc) {
                        double ss = 0.0;
                        for (int dr = -eta; dr <= eta; ++dr) {
                            const double* a = ext.data() +
                                              static_cast<std::size_t>(r + R + dr) * ew +
                                              (c + R - eta);
                            const double* b = ext.data() +
                                              static_cast<std::size_t>(r + R + ur + dr) * ew +
                                              (c + R + uc - eta);
                            for (int i = 0; i < span; ++i) {
                                const double t = a[i] - b[i];
                                ss += t * t;
                            }
                        }
                        rho[idx++] = std::max(std::sqrt(ss * inv_m) - sub, 0.0);
                    }
                }

                std::copy(rho.begin(), rho.end(), sorted.begin());
                std::sort(sorted.begin(), sorted.end());
                double a_hat = 0.0;
                const bool finite = remark_bandwidth_sorted(sorted.data(), M, sigma2, &a_hat);
                const double inv_a = finite ? 1.0 / a_hat : 0.0;

                double acc = 0.0;
                double wsum = 0.0;
                idx = 0;
                for (int ur = -sr; ur <= sr; ++ur) {
                    const double* row = ext.data() + static_cast<std::size_t>(r + R + ur) * ew;
                    for (int uc = -sr; uc <= sr; ++uc, ++idx) {
                        const double wgt = finite ? triangular(rho[idx] * inv_a) : 1.0;
                        acc += wgt * row[c + R + uc];
                        wsum += wgt;
                    }
                }
                out[static_cast<std::size_t>(r) * w + c] = acc / wsum;
            }
        }
    }
    return Image(w, h, std::move(out));
}

Image owmf_denoise(const Image& img, double sigma, double p_hint,
                   const OwmfParams& params, int threads) {
    params.validate();
    check_sigma(sigma);
    if (!(p_hint >= 0.0 && p_hint <= 1.0)) {
        throw ValidationError("p hint must lie in [0,1]");
    }
    const double h1_value = resolved_h1(params, p_hint, sigma);
    const double h2_value = resolved_h2(params, p_hint);

    Image current = img;
    for (int pass = 0; pass < params.iterations; ++pass) {
        current = owmf_pass(current, sigma, h1_value, h2_value, params, threads);
    }
    return current;
}

PixelWeights owf_pixel_weights(const Image& img, double sigma,
                               const WindowSpec& window, PixelCoord x0) {
    window.validate();
    check_sigma(sigma);
    PixelWeights pw;
    pw.center = x0;
    pw.candidates = window_coords(x0, window.search_radius);

    std::vector<double> rhos;
    rhos.reserve(pw.candidates.size());
    for (PixelCoord cand : pw.candidates) {
        rhos.push_back(rho_plain(patch_distance(img, cand, x0, window.patch_radius), sigma));
    }
    pw.bandwidth = solve_bandwidth(rhos, sigma);

    pw.weights.resize(rhos.size());
    double wsum = 0.0;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        pw.weights[i] = pw.bandwidth ? triangular(rhos[i] / *pw.bandwidth) : 1.0;
        wsum += pw.weights[i];
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        pw.weights[i] /= wsum;
        acc += pw.weights[i] * mirrored_at(img, pw.candidates[i]);
    }
    pw.output = acc;
    return pw;
}

PixelWeights owmf_pixel_weights(const Image& img, double sigma, double p_hint,
                                const OwmfParams& params, PixelCoord x0) {
    params.validate();
    check_sigma(sigma);
    if (!(p_hint >= 0.0 && p_hint <= 1.0)) {
        throw ValidationError("p hint must lie in [0,1]");
    }
    const double h1_value = resolved_h1(params, p_hint, sigma);
    const double h2_value = resolved_h2(params, p_hint);

    DetectParams det = params.detect;
    det.sigma = sigma;
    const ScalarField roadg = roadg_map(img, det);
    const ScalarField j1 = j_map(roadg, h1_value);
    const ScalarField j2 = j_map(roadg, h2_value);

    OwmfParams local = params;
    local.detect.sigma = sigma;

    PixelWeights pw;
    pw.center = x0;
    pw.candidates = window_coords(x0, params.window.search_radius);

    std::vector<double> rhos;
    rhos.reserve(pw.candidates.size());
    for (PixelCoord cand : pw.candidates) {
        rhos.push_back(rho_weighted(img, j1, cand, x0, local));
    }
    pw.bandwidth = solve_bandwidth(rhos, sigma);

    pw.weights.resize(rhos.size());
    double wsum = 0.0;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const double tri = pw.bandwidth ? triangular(rhos[i] / *pw.bandwidth) : 1.0;
        pw.weights[i] = mirrored_at(j2, pw.candidates[i]) * tri;
        wsum += pw.weights[i];
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        pw.weights[i] /= wsum;
        acc += pw.weights[i] * mirrored_at(img, pw.candidates[i]);
    }
    pw.output = acc;
    return pw;
}

} // namespace owmf
