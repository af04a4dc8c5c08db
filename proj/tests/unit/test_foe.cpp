#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "sadir/foe.hpp"

using namespace sadir;
using namespace testutil;

namespace {

GmmParams random_gmm(uint32_t seed) {
    GmmParams p;
    std::vector<double> r = random_vector(12, seed);
    for (int i = 0; i < 4; ++i) {
        p.gamma[(size_t)i] = r[(size_t)i];
        p.mu[(size_t)i] = 0.3 * r[(size_t)(i + 4)];
        p.log_delta[(size_t)i] = -1.0 + r[(size_t)(i + 8)];
    }
    return p;
}

Kernel2D delta_kernel() {
    Kernel2D k;
    k.taps[4] = 1.0;
    return k;
}

std::vector<FoeChannel> quiet_channels() {
    std::vector<FoeChannel> ch(4);
    for (auto& c : ch) {
        c.g1 = c.g2 = c.g3 = delta_kernel();
        c.gmm.mu = {0.0, 0.0, 0.0, 0.0};
        c.gmm.log_delta = {0.0, 0.0, 0.0, 0.0};
    }
    return ch;
}

}  // namespace

TEST_CASE("mixture response vanishes when all weights are zero") {
    GmmParams p = random_gmm(141);
    p.gamma = {0.0, 0.0, 0.0, 0.0};
    std::vector<double> x = random_vector(20, 142);
    for (double v : gmm_phi(x, p)) CHECK(v == 0.0);
}

TEST_CASE("a single component peaks at its mean with its weight") {
    GmmParams p;
    p.gamma = {2.0, 0.0, 0.0, 0.0};
    p.mu = {0.5, 0.0, 0.0, 0.0};
    p.log_delta = {0.0, 0.0, 0.0, 0.0};
    std::vector<double> out = gmm_phi({0.5}, p);
    CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("mixture response matches independent re-evaluation") {
    GmmParams p = random_gmm(143);
    std::vector<double> x = random_vector(32, 144);
    std::vector<double> got = gmm_phi(x, p);
    for (size_t i = 0; i < x.size(); ++i) {
        double want = 0.0;
        for (int nc = 0; nc < 4; ++nc) {
            double d = x[i] - p.mu[(size_t)nc];
            double delta = std::exp(p.log_delta[(size_t)nc]);
            want += p.gamma[(size_t)nc] * std::exp(-d * d / (2.0 * delta));
        }
        CHECK(rel_err(got[i], want, 1e-14) < 1e-14);
    }
}

TEST_CASE("the response obeys the weight envelope bound") {
    GmmParams p = random_gmm(145);
    double bound = 0.0;
    for (double gms : p.gamma) bound += std::abs(gms);
    std::vector<double> x = random_vector(64, 146);
    for (double v : gmm_phi(x, p)) CHECK(std::abs(v) <= bound + 1e-15);
}

TEST_CASE("mixture partials have the stated closed forms") {
    GmmParams p = random_gmm(147);
    std::vector<double> x = random_vector(8, 148);
    GmmPhiGrads g = gmm_phi_grads(x, p);
    for (size_t i = 0; i < x.size(); ++i)
        for (int nc = 0; nc < 4; ++nc) {
            double d = x[i] - p.mu[(size_t)nc];
            double delta = std::exp(p.log_delta[(size_t)nc]);
            double e = std::exp(-d * d / (2.0 * delta));
            CHECK(g.dgamma[(size_t)nc][i] == doctest::Approx(e).epsilon(1e-14));
        }

    // Stationary at the peak of an isolated component.
    GmmParams single;
    single.gamma = {1.5, 0.0, 0.0, 0.0};
    single.mu = {-0.25, 0.0, 0.0, 0.0};
    single.log_delta = {-2.0, 0.0, 0.0, 0.0};
    GmmPhiGrads at_peak = gmm_phi_grads({-0.25}, single);
    CHECK(at_peak.dx[0] == 0.0);

    // Zero weights kill the x-gradient but not the weight gradient.
    GmmParams quiet = random_gmm(149);
    quiet.gamma = {0.0, 0.0, 0.0, 0.0};
    GmmPhiGrads gq = gmm_phi_grads(x, quiet);
    for (double v : gq.dx) CHECK(v == 0.0);
}

TEST_CASE("mixture partials match central finite differences") {
    GmmParams p = random_gmm(151);
    std::vector<double> x = random_vector(6, 152);
    GmmPhiGrads g = gmm_phi_grads(x, p);
    const double h = 1e-6;
    // Absolute slack of 1e-9 absorbs difference-quotient roundoff on partials
    // that are tiny (small weight, far tail) without loosening the relative
    // bound everywhere else.
    auto close = [](double a, double b) {
        return std::abs(a - b) <=
               1e-9 + 1e-6 * std::max(std::abs(a), std::abs(b));
    };

    for (size_t i = 0; i < x.size(); ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double fd = (gmm_phi(xp, p)[i] - gmm_phi(xm, p)[i]) / (2.0 * h);
        CHECK(close(g.dx[i], fd));
    }
    for (int nc = 0; nc < 4; ++nc) {
        GmmParams pp = p, pm = p;
        pp.gamma[(size_t)nc] += h;
        pm.gamma[(size_t)nc] -= h;
        std::vector<double> up = gmm_phi(x, pp), um = gmm_phi(x, pm);
        for (size_t i = 0; i < x.size(); ++i)
            CHECK(close(g.dgamma[(size_t)nc][i],
                        (up[i] - um[i]) / (2.0 * h)));

        pp = pm = p;
        pp.mu[(size_t)nc] += h;
        pm.mu[(size_t)nc] -= h;
        up = gmm_phi(x, pp);
        um = gmm_phi(x, pm);
        for (size_t i = 0; i < x.size(); ++i)
            CHECK(close(g.dmu[(size_t)nc][i], (up[i] - um[i]) / (2.0 * h)));

        pp = pm = p;
        pp.log_delta[(size_t)nc] += h;
        pm.log_delta[(size_t)nc] -= h;
        up = gmm_phi(x, pp);
        um = gmm_phi(x, pm);
        for (size_t i = 0; i < x.size(); ++i)
            CHECK(close(g.dlog_delta[(size_t)nc][i],
                        (up[i] - um[i]) / (2.0 * h)));
    }
}

TEST_CASE("the regularizer vanishes when every channel weight is zero") {
    std::vector<FoeChannel> ch = quiet_channels();
    Image x = random_image(12, 1.0, 153);
    for (double v : foe_apply(x, ch).data) CHECK(v == 0.0);
}

TEST_CASE("delta filters collapse the channel to the pointwise response") {
    std::vector<FoeChannel> ch = quiet_channels();
    ch[0].gmm.gamma = {0.8, 0.0, 0.0, 0.0};
    ch[0].gmm.mu = {0.1, 0.0, 0.0, 0.0};
    ch[0].gmm.log_delta = {-1.5, 0.0, 0.0, 0.0};
    Image x = random_image(10, 1.0, 154);
    Image out = foe_apply(x, ch);
    std::vector<double> want = gmm_phi(x.data, ch[0].gmm);
    for (size_t i = 0; i < out.size(); ++i)
        CHECK(out.data[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("the channel sum is translation-equivariant in the interior") {
    std::vector<FoeChannel> ch(4);
    uint32_t seed = 161;
    for (auto& c : ch) {
        for (Kernel2D* k : {&c.g1, &c.g2, &c.g3}) {
            std::vector<double> t = random_vector(9, seed++);
            for (int i = 0; i < 9; ++i) k->taps[(size_t)i] = 0.3 * t[(size_t)i];
        }
        c.gmm = random_gmm(seed++);
    }

    const int n = 20;
    Image x = random_image(n, 1.0, seed);
    Image shifted(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 1; j < n; ++j) shifted.at(i, j) = x.at(i, j - 1);

    Image fx = foe_apply(x, ch);
    Image fs = foe_apply(shifted, ch);
    // Each of the six 3x3 stages re-applies zero padding, so border effects
    // reach 6 pixels in from both sides; compare only columns further in.
    for (int i = 0; i < n; ++i)
        for (int j = 7; j <= n - 8; ++j)
            CHECK(fs.at(i, j) == doctest::Approx(fx.at(i, j - 1)).epsilon(1e-12));
}

TEST_CASE("the channel count is fixed") {
    Image x = random_image(8, 1.0, 171);
    std::vector<FoeChannel> three(3);
    CHECK_THROWS_AS(foe_apply(x, three), std::invalid_argument);
}
