#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "sadir/metrics.hpp"
#include "sadir/phantoms.hpp"

using namespace sadir;
using namespace testutil;

namespace {

// Gaussian-profile edge through the image center at the standard slant used
// for sub-pixel sampling (tan = 0.1545 from vertical).
Image slanted_edge(int n, double sigma_px, double ps = 1.0) {
    PhantomSpec spec;
    spec.kind = PhantomKind::edge;
    spec.n = n;
    spec.pixel_size = ps;
    spec.edge_angle_deg = std::atan(0.1545) * 180.0 / kPi;
    spec.edge_sigma_px = sigma_px;
    return generate(spec);
}

Roi centered_roi(int n) {
    Roi roi;
    roi.x0 = n / 4;
    roi.y0 = n / 4;
    roi.width = n / 2;
    roi.height = n / 2;
    return roi;
}

double gaussian_mtf(double sigma_px, double f_cyc_per_px) {
    return std::exp(-2.0 * kPi * kPi * sigma_px * sigma_px * f_cyc_per_px *
                    f_cyc_per_px);
}

}  // namespace

TEST_CASE("rmse basics") {
    Image a = random_image(12, 1.0, 401);
    CHECK(rmse(a, a) == 0.0);

    Image b = a;
    for (double& v : b.data) v += 0.125;
    CHECK(rmse(a, b) == doctest::Approx(0.125).epsilon(1e-14));

    Image c = random_image(12, 1.0, 402);
    double acc = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        double d = a.data[i] - c.data[i];
        acc += d * d;
    }
    CHECK(rmse(a, c) ==
          doctest::Approx(std::sqrt(acc / (double)a.data.size()))
              .epsilon(1e-14));
    CHECK(rmse(a, c) == rmse(c, a));

    Image small = random_image(8, 1.0, 403);
    CHECK_THROWS_AS(rmse(a, small), std::invalid_argument);
}

TEST_CASE("perfectly vertical hard edge uses whole-pixel bins and stays flat") {
    PhantomSpec spec;
    spec.kind = PhantomKind::edge;
    spec.n = 64;
    spec.edge_angle_deg = 0.0;
    spec.edge_sigma_px = 0.0;
    Image img = generate(spec);

    MtfCurve curve = mtf_edge(img, centered_roi(64));
    CHECK(curve.values[0] == 1.0);
    REQUIRE(curve.frequencies.size() == curve.values.size());
    // Whole-pixel fallback caps the curve at 0.45 cycles/px.
    CHECK(curve.frequencies.back() <= 0.45 + 1e-9);
    CHECK(curve.frequencies.back() > 0.40);
    for (size_t i = 0; i < curve.values.size(); ++i) {
        CHECK(std::isfinite(curve.values[i]));
        if (curve.frequencies[i] <= 0.4)
            CHECK(curve.values[i] >= 0.95);
    }
}

TEST_CASE("gaussian edge curve matches its analytic transfer function") {
    const double sigma = 1.0;
    Image img = slanted_edge(64, sigma);
    MtfCurve curve = mtf_edge(img, centered_roi(64));
    CHECK(curve.values[0] == 1.0);

    const double f10 = std::sqrt(std::log(10.0) / (2.0 * kPi * kPi)) / sigma;
    int checked = 0;
    for (size_t i = 0; i < curve.frequencies.size(); ++i) {
        double f = curve.frequencies[i];
        if (f > f10) break;
        CHECK(std::abs(curve.values[i] - gaussian_mtf(sigma, f)) <= 0.03);
        ++checked;
    }
    CHECK(checked >= 20);

    double f50 = mtf_at(curve, 0.5);
    double want = std::sqrt(std::log(2.0) / 2.0) / (kPi * sigma);
    CHECK(std::abs(f50 - want) <= 0.03 * want);
}

TEST_CASE("half-amplitude frequency drops as the edge gets blurrier") {
    double f_sharp = mtf_at(mtf_edge(slanted_edge(64, 0.5), centered_roi(64)),
                            0.5);
    double f_mid = mtf_at(mtf_edge(slanted_edge(64, 1.0), centered_roi(64)),
                          0.5);
    double f_soft = mtf_at(mtf_edge(slanted_edge(64, 2.0), centered_roi(64)),
                           0.5);
    CHECK(f_sharp > f_mid);
    CHECK(f_mid > f_soft);
}

TEST_CASE("frequencies are reported per millimetre, not per pixel") {
    // Same physical blur (1 px at 1 mm; 2 px at 0.5 mm is the same mm width),
    // so the physical half-amplitude frequency must agree.
    double f_coarse = mtf_at(
        mtf_edge(slanted_edge(64, 1.0, 1.0), centered_roi(64)), 0.5);
    double f_fine = mtf_at(
        mtf_edge(slanted_edge(128, 2.0, 0.5), centered_roi(128)), 0.5);
    CHECK(f_fine == doctest::Approx(f_coarse).epsilon(0.05));
}

TEST_CASE("transposed edge image measures identically through auto-detect") {
    Image img = slanted_edge(64, 1.0);
    Image t(64, 1.0);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) t.at(i, j) = img.at(j, i);

    MtfCurve v = mtf_edge(img, centered_roi(64), EdgeAxis::vertical);
    MtfCurve a = mtf_edge(img, centered_roi(64), EdgeAxis::auto_detect);
    MtfCurve h = mtf_edge(t, centered_roi(64), EdgeAxis::auto_detect);
    CHECK(a.values == v.values);
    CHECK(h.values == v.values);
    CHECK(h.frequencies == v.frequencies);
}

TEST_CASE("edge measurement rejects unusable input") {
    Image flat(32, 1.0);
    for (double& v : flat.data) v = 0.02;
    CHECK_THROWS_AS(mtf_edge(flat, centered_roi(32)), std::invalid_argument);

    Image img = slanted_edge(64, 1.0);
    Roi tiny{2, 2, 6, 8};
    CHECK_THROWS_AS(mtf_edge(img, tiny), std::invalid_argument);
    Roi outside{40, 40, 32, 32};
    CHECK_THROWS_AS(mtf_edge(img, outside), std::invalid_argument);
}

TEST_CASE("curve lookup interpolates and reports misses") {
    MtfCurve c;
    c.frequencies = {0.0, 1.0, 2.0};
    c.values = {1.0, 0.5, 0.0};
    CHECK(mtf_at(c, 0.5) == 1.0);
    CHECK(mtf_at(c, 0.25) == doctest::Approx(1.5).epsilon(1e-14));

    MtfCurve shallow;
    shallow.frequencies = {0.0, 1.0};
    shallow.values = {1.0, 0.9};
    CHECK_THROWS_AS(mtf_at(shallow, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(mtf_at(c, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mtf_at(c, 1.0), std::invalid_argument);
    MtfCurve bad;
    bad.frequencies = {0.0};
    bad.values = {1.0};
    CHECK_THROWS_AS(mtf_at(bad, 0.5), std::invalid_argument);
}

TEST_CASE("bicubic upscale metadata and constant preservation") {
    Image x = random_image(10, 0.8, 404);
    Image up = bicubic_upscale2(x);
    CHECK(up.n == 20);
    CHECK(up.pixel_size == doctest::Approx(0.4));

    Image c(10, 0.8);
    for (double& v : c.data) v = 0.37;
    Image upc = bicubic_upscale2(c);
    for (double v : upc.data) CHECK(v == doctest::Approx(0.37).epsilon(1e-13));
}

TEST_CASE("bicubic upscale reproduces linear ramps away from the borders") {
    const int n = 12;
    Image x(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x.at(i, j) = 0.3 * j + 0.05;
    Image up = bicubic_upscale2(x);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 3; j <= 2 * n - 4; ++j) {
            double src = 0.5 * j - 0.25;
            CHECK(up.at(i, j) ==
                  doctest::Approx(0.3 * src + 0.05).epsilon(1e-12));
        }
}

TEST_CASE("bicubic impulse response carries the separable cubic weights") {
    auto weight = [](double t, int k) {
        switch (k) {
            case 0: return ((-0.5 * t + 1.0) * t - 0.5) * t;
            case 1: return (1.5 * t - 2.5) * t * t + 1.0;
            case 2: return ((-1.5 * t + 2.0) * t + 0.5) * t;
            default: return (0.5 * t - 0.5) * t * t;
        }
    };
    const int n = 12, r0 = 6, c0 = 5;
    Image x(n, 1.0);
    x.at(r0, c0) = 1.0;
    Image up = bicubic_upscale2(x);

    // Output j reads source position 0.5j - 0.25; the impulse contributes
    // weight(t, k) whenever c0 == floor(pos) - 1 + k.
    auto w_at = [&](int j, int center) {
        double pos = 0.5 * j - 0.25;
        int i0 = (int)std::floor(pos);
        double t = pos - i0;
        double acc = 0.0;
        for (int k = 0; k < 4; ++k)
            if (i0 - 1 + k == center) acc += weight(t, k);
        return acc;
    };
    for (int i = 2 * r0 - 4; i <= 2 * r0 + 4; ++i)
        for (int j = 2 * c0 - 4; j <= 2 * c0 + 4; ++j)
            CHECK(up.at(i, j) ==
                  doctest::Approx(w_at(i, r0) * w_at(j, c0)).epsilon(1e-13));
}

TEST_CASE("bicubic upscale commutes with affine intensity maps") {
    Image x = random_image(9, 1.0, 405);
    Image y = x;
    for (double& v : y.data) v = 1.7 * v + 0.4;
    Image up_y = bicubic_upscale2(y);
    Image up_x = bicubic_upscale2(x);
    for (size_t i = 0; i < up_y.data.size(); ++i)
        CHECK(up_y.data[i] ==
              doctest::Approx(1.7 * up_x.data[i] + 0.4).epsilon(1e-12));
}

TEST_CASE("nearest-neighbor upscale replicates pixels exactly") {
    Image x = random_image(7, 2.0, 406);
    Image up = nearest_upscale2(x);
    CHECK(up.n == 14);
    CHECK(up.pixel_size == doctest::Approx(1.0));
    for (int i = 0; i < 14; ++i)
        for (int j = 0; j < 14; ++j) CHECK(up.at(i, j) == x.at(i / 2, j / 2));
}
