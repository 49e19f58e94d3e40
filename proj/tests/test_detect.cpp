#include "doctest.h"

#include <cmath>

#include "owmf/detect.hpp"
#include "oracles.hpp"

using namespace owmf;

namespace {

Image single_impulse_5x5(double value) {
    Image img(5, 5, 0.0);
    img.at(2, 2) = value;
    return img;
}

} // namespace

TEST_CASE("detect params are range checked") {
    DetectParams p;
    p.d = 1;
    p.K = 1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.K = 9; // card of the deleted 3x3 neighborhood is 8
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.K = 8;
    CHECK_NOTHROW(p.validate()); // K == card allowed; strict callers warn
    CHECK(p.k_is_full_window());
    p.K = 4;
    CHECK_NOTHROW(p.validate());
    CHECK(!p.k_is_full_window());
    p.d = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("road is zero on constant images") {
    const Image img(7, 9, 42.0);
    const ScalarField road = road_map(img, 2, 12);
    for (double v : road.values()) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("road on a single impulse plate") {
    const Image img = single_impulse_5x5(255.0);
    const ScalarField road = road_map(img, 1, 4);
    // all 8 differences at the impulse are 255; its 4-neighbors see the
    // impulse once, so their 4 smallest differences are all 0
    CHECK(road.at(2, 2) == 1020.0);
    CHECK(road.at(1, 2) == 0.0);
    CHECK(road.at(3, 2) == 0.0);
    CHECK(road.at(2, 1) == 0.0);
    CHECK(road.at(2, 3) == 0.0);
}

TEST_CASE("road equals the full-sort oracle exactly") {
    for (std::uint32_t seed : {1u, 2u, 3u}) {
        const Image img = oracle::random_image(32, 32, 0, 255, seed);
        for (int d : {1, 2}) {
            const int K = d == 1 ? 4 : 12;
            const ScalarField fast = road_map(img, d, K);
            const ScalarField slow = oracle::road_full_sort(img, d, K);
            CHECK(fast.values() == slow.values());
        }
    }
}

TEST_CASE("roadg basics") {
    DetectParams p;
    p.d = 2;
    p.K = 12;

    SUBCASE("constant image gives zero for any sigma") {
        p.sigma = 25.0;
        const ScalarField g = roadg_map(Image(6, 6, 9.0), p);
        for (double v : g.values()) {
            CHECK(v == 0.0);
        }
    }

    SUBCASE("sigma 0 reduces to road/K") {
        p.sigma = 0.0;
        const Image img = oracle::random_image(16, 16, 0, 255, 4);
        const ScalarField g = roadg_map(img, p);
        const ScalarField road = road_map(img, p.d, p.K);
        for (std::size_t i = 0; i < g.values().size(); ++i) {
            CHECK(g.values()[i] == doctest::Approx(road.values()[i] / 12.0).epsilon(1e-15));
        }
    }

    SUBCASE("single impulse with sigma 15") {
        p.sigma = 15.0;
        const ScalarField g = roadg_map(single_impulse_5x5(255.0), p);
        CHECK(g.at(2, 2) == 240.0); // (255 - 15)^+, all 24 diffs equal 255
    }
}

TEST_CASE("roadg never exceeds road/K") {
    const Image img = oracle::random_image(24, 24, 0, 255, 8);
    DetectParams p;
    p.d = 2;
    p.K = 12;
    p.sigma = 10.0;
    const ScalarField g = roadg_map(img, p);
    const ScalarField road = road_map(img, p.d, p.K);
    for (std::size_t i = 0; i < g.values().size(); ++i) {
        CHECK(g.values()[i] <= road.values()[i] / p.K + 1e-12);
    }
}

TEST_CASE("j map: range, fixed points, monotonicity") {
    CHECK_THROWS_AS(j_map(ScalarField(2, 2, 0.0), 0.0), ValidationError);
    CHECK_THROWS_AS(j_map(ScalarField(2, 2, 0.0), -3.0), ValidationError);

    const double H = 14.0;
    const ScalarField g(1, 3, {0.0, H, 2 * H});
    const ScalarField j = j_map(g, H);
    CHECK(j.at(0, 0) == 1.0);
    CHECK(j.at(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(j.at(0, 1) > j.at(0, 2));
    for (double v : j.values()) {
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("maps are translation equivariant away from borders") {
    const Image inner = oracle::random_image(12, 12, 0, 255, 6);
    // embed the same content at two offsets inside a larger canvas
    Image a(24, 24, 0.0);
    Image b(24, 24, 0.0);
    for (int r = 0; r < 12; ++r) {
        for (int c = 0; c < 12; ++c) {
            a.at(c + 3, r + 3) = inner.at(c, r);
            b.at(c + 7, r + 8) = inner.at(c, r);
        }
    }
    DetectParams p;
    p.d = 2;
    p.K = 12;
    p.sigma = 5.0;
    const ScalarField ga = roadg_map(a, p);
    const ScalarField gb = roadg_map(b, p);
    // compare the deep interior, clear of both borders and the pasted edge
    for (int r = 3; r < 7; ++r) {
        for (int c = 3; c < 7; ++c) {
            CHECK(ga.at(c + 3, r + 3) == gb.at(c + 7, r + 8));
        }
    }
}

TEST_CASE("parameter formulas h1 and h2") {
    CHECK(h1(0.0, 10.0) == doctest::Approx(35.0).epsilon(1e-15));
    CHECK(h2(0.0) == 27.0);
    CHECK(h1(0.2, 20.0) == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(h2(0.2) == doctest::Approx(23.0).epsilon(1e-15));
    CHECK(h1(0.5, 25.0) == doctest::Approx(5.0 + 30.0 / 11.0).epsilon(1e-12));
    CHECK(h2(0.5) == doctest::Approx(17.0).epsilon(1e-15));
}

TEST_CASE("scalar field rejects negative or non-finite values") {
    CHECK_THROWS_AS(ScalarField(2, 1, {1.0, -0.5}), ValidationError);
    CHECK_THROWS_AS(ScalarField(1, 1, {std::nan("")}), ValidationError);
}
