#include "doctest.h"

#include <cmath>

#include "owmf/metrics.hpp"
#include "oracles.hpp"

using namespace owmf;

TEST_CASE("mse basics") {
    const Image a = oracle::random_image(8, 8, 0, 255, 3);
    CHECK(mse(a, a) == 0.0);

    const Image zero(8, 8, 0.0);
    const Image full(8, 8, 255.0);
    CHECK(mse(zero, full) == doctest::Approx(65025.0).epsilon(1e-15));

    const Image one(8, 8, 1.0);
    CHECK(mse(zero, one) == doctest::Approx(1.0).epsilon(1e-15));

    const Image wrong(7, 8, 0.0);
    CHECK_THROWS_AS(mse(zero, wrong), ValidationError);
}

TEST_CASE("psnr basics") {
    const Image zero(8, 8, 0.0);
    const Image full(8, 8, 255.0);
    const Image one(8, 8, 1.0);

    CHECK(!psnr(zero, zero).has_value()); // infinite
    CHECK(*psnr(zero, full) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(*psnr(zero, one) == doctest::Approx(20.0 * std::log10(255.0)).epsilon(1e-12));
}

TEST_CASE("psnr is symmetric and consistent with mse") {
    const Image a = oracle::random_image(16, 16, 0, 255, 10);
    const Image b = oracle::random_image(16, 16, 0, 255, 11);
    CHECK(*psnr(a, b) == *psnr(b, a));

    const QualityReport q = quality(a, b);
    CHECK(q.mse == mse(a, b));
    CHECK(*q.psnr_db == doctest::Approx(10.0 * std::log10(65025.0 / q.mse)).epsilon(1e-15));
}
