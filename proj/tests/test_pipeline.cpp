#include "doctest.h"

#include <string>

#include "owmf/bench.hpp"
#include "owmf/io.hpp"
#include "owmf/metrics.hpp"
#include "owmf/noise.hpp"
#include "owmf/trilateral.hpp"

using namespace owmf;

namespace {

Image crop(const Image& img, int col0, int row0, int w, int h) {
    std::vector<double> data(static_cast<std::size_t>(w) * h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            data[static_cast<std::size_t>(r) * w + c] = img.at(col0 + c, row0 + r);
        }
    }
    return Image(w, h, std::move(data));
}

const Image& photo() {
    static const Image img = load_image(std::string(OWMF_FIXTURE_DIR) + "/camera.pgm");
    return img;
}

double score(const Image& truth, const Image& candidate) {
    return psnr(truth, candidate).value_or(1e9);
}

} // namespace

TEST_CASE("owmf strongly improves a mixed-noise photo crop") {
    const Image clean = crop(photo(), 128, 128, 128, 128);
    NoiseSpec spec;
    spec.sigma = 10.0;
    spec.p = 0.2;
    spec.seed = 2024;
    const Image noisy = add_mixed(clean, spec).image;

    OwmfParams params; // paper defaults: h=6, eta=12, d=2, K=12, kappa0
    const Image restored = owmf_denoise(noisy, spec.sigma, spec.p, params);

    const double before = score(clean, noisy);
    const double after = score(clean, restored);
    CHECK(after > before + 8.0);
    CHECK(after > 27.0);
}

TEST_CASE("owf handles a pure gaussian photo crop") {
    const Image clean = crop(photo(), 64, 300, 128, 128);
    const double sigma = 15.0;
    const Image noisy = add_gaussian(clean, sigma, 5);

    WindowSpec window; // h=6, eta=12
    const Image restored = owf_denoise(noisy, sigma, window);
    CHECK(score(clean, restored) > score(clean, noisy) + 4.0);
}

TEST_CASE("wider detection window wins at heavy impulse levels") {
    const Image clean = crop(photo(), 192, 64, 128, 128);
    NoiseSpec spec;
    spec.p = 0.4;
    spec.seed = 7;
    const Image noisy = add_mixed(clean, spec).image;

    OwmfParams wide;
    wide.detect = DetectParams{2, 12, 0.0};
    wide.iterations = 3;
    OwmfParams narrow = wide;
    narrow.detect = DetectParams{1, 4, 0.0};

    const double psnr_wide = score(clean, owmf_denoise(noisy, 0.0, spec.p, wide));
    const double psnr_narrow = score(clean, owmf_denoise(noisy, 0.0, spec.p, narrow));
    CHECK(psnr_wide >= psnr_narrow);
}

TEST_CASE("extra iterations pay off at p = 0.5") {
    const Image clean = crop(photo(), 256, 256, 96, 96);
    NoiseSpec spec;
    spec.p = 0.5;
    spec.sigma = 10.0;
    spec.seed = 11;
    const Image noisy = add_mixed(clean, spec).image;

    OwmfParams once;
    OwmfParams thrice;
    thrice.iterations = 3;
    const double one = score(clean, owmf_denoise(noisy, spec.sigma, spec.p, once));
    const double three = score(clean, owmf_denoise(noisy, spec.sigma, spec.p, thrice));
    CHECK(three >= one);
}

TEST_CASE("owmf outperforms the best swept trilateral baseline on mixed noise") {
    const Image clean = crop(photo(), 320, 128, 128, 128);
    NoiseSpec spec;
    spec.sigma = 10.0;
    spec.p = 0.2;
    spec.seed = 3;
    const Image noisy = add_mixed(clean, spec).image;

    double best_trif = -1e9;
    for (const TrifParams& p : trif_sweep_grid(spec.sigma)) {
        best_trif = std::max(best_trif, score(clean, trif_denoise(noisy, p)));
    }
    CHECK(best_trif > score(clean, noisy)); // the baseline itself must help

    OwmfParams params;
    const double owmf_score = score(clean, owmf_denoise(noisy, spec.sigma, spec.p, params));
    CHECK(owmf_score > best_trif);
}
