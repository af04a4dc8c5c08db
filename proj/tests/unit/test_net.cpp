#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "sadir/conv.hpp"
#include "sadir/fbp.hpp"
#include "sadir/foe.hpp"
#include "sadir/net.hpp"
#include "sadir/projector.hpp"
#include "sadir/resample.hpp"
#include "sadir/train.hpp"

using namespace sadir;
using namespace testutil;

namespace {

NetParams reference_params(uint64_t seed, int n_blocks = 1) {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.n_blocks = n_blocks;
    return init_net_params(cfg);
}

Sinogram toy_measurement(const Geometry& hr, int n, double ps, uint32_t seed) {
    Image x = random_image(n, ps, seed);
    for (double& v : x.data) v = 0.02 * std::abs(v);
    return forward_project(x, hr.lr_counterpart());
}

Kernel2D delta2() {
    Kernel2D k;
    k.taps[4] = 1.0;
    return k;
}

}  // namespace

TEST_CASE("parameter flattening round-trips and names every scalar") {
    NetParams p = reference_params(5, 3);
    CHECK(param_count(p) == 3u * (size_t)kScalarsPerBlock);
    CHECK((size_t)kScalarsPerBlock ==
          3u + 3u * 3u + 3u * 9u + 4u * (3u * 9u + 12u));

    std::vector<double> flat = flatten_params(p);
    CHECK(flat.size() == param_count(p));
    NetParams q = zeros_like(p);
    unflatten_params(flat, q);
    CHECK(flatten_params(q) == flat);

    std::vector<std::string> names = param_names(p);
    CHECK(names.size() == flat.size());
    for (size_t i = 1; i < names.size(); ++i)
        CHECK(names[i] != names[i - 1]);
    CHECK(names[0] == "block0.lambda1");
}

TEST_CASE("network parameter validation") {
    NetParams p = reference_params(6, 2);
    p.validate();
    p.shared = true;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    NetParams shared = reference_params(6, 1);
    shared.shared = true;
    shared.shared_iterations = 3;
    shared.validate();
    CHECK(shared.iterations() == 3);
}

TEST_CASE("initialization is the upsample-then-reconstruct path") {
    Geometry hr = Geometry::uniform(12, 32, 1.0);
    Sinogram y_l = toy_measurement(hr, 16, 1.0, 301);
    Image got = init_input(y_l, hr, 16, 1.0);
    Image want = fbp(upsample_det(y_l), hr, 16, 1.0);
    CHECK(got.data == want.data);

    Sinogram wrong(12, 32, 1.0);
    CHECK_THROWS_AS(init_input(wrong, hr, 16, 1.0), std::invalid_argument);
}

TEST_CASE("a block with zero mixing weights is the identity on nonnegative input") {
    Geometry hr = Geometry::uniform(10, 24, 1.0);
    Sinogram y_l = toy_measurement(hr, 12, 1.0, 302);
    BlockParams p = reference_params(7).blocks[0];
    p.lambda1 = p.lambda2 = p.lambda3 = 0.0;

    Image x(12, 1.0);
    x.data = random_vector(x.size(), 303);
    for (double& v : x.data) v = std::abs(v);
    Image x_l = fbp(y_l, hr.lr_counterpart(), 12, 1.0);
    Image out = sadir_block(x, y_l, x_l, p, hr);
    CHECK(out.data == x.data);
}

TEST_CASE("with delta blur kernels the deblur-only block blends toward x_l") {
    Geometry hr = Geometry::uniform(10, 24, 1.0);
    Sinogram y_l = toy_measurement(hr, 12, 1.0, 304);
    BlockParams p = reference_params(8).blocks[0];
    p.lambda1 = p.lambda3 = 0.0;
    p.lambda2 = 0.35;
    p.b1 = p.b2 = p.b3 = delta2();

    Image x(12, 1.0);
    x.data = random_vector(x.size(), 305);
    Image x_l = fbp(y_l, hr.lr_counterpart(), 12, 1.0);
    Image out = sadir_block(x, y_l, x_l, p, hr);
    for (size_t i = 0; i < out.size(); ++i) {
        double want = (1.0 - p.lambda2) * x.data[i] + p.lambda2 * x_l.data[i];
        if (want < 0.0) want = 0.0;
        CHECK(out.data[i] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("a consistent measurement zeroes the super-resolution direction") {
    Geometry hr = Geometry::uniform(8, 20, 1.0);
    const int n = 10;
    BlockParams p = reference_params(9).blocks[0];
    p.c1 = p.c2 = p.c3 = Kernel1D{{0.0, 1.0, 0.0}};

    Image x(n, 1.0);
    x.data = random_vector(x.size(), 306);
    Sinogram y_l = downsample_det(forward_project(x, hr));
    Image g = sr_fidelity_grad(x, y_l, p, hr);
    for (double v : g.data) CHECK(v == 0.0);
}

TEST_CASE("fidelity directions equal their public-operator compositions") {
    Geometry hr = Geometry::uniform(9, 22, 0.9);
    const int n = 11;
    const double ps = 0.8;
    BlockParams p = reference_params(10).blocks[0];
    Image x = random_image(n, ps, 307);
    Sinogram y_l = toy_measurement(hr, n, ps, 308);

    Sinogram stage = conv_sino(conv_sino(conv_sino(forward_project(x, hr),
                                                   p.c1), p.c2), p.c3);
    Sinogram res = downsample_det(stage);
    for (size_t i = 0; i < res.size(); ++i) res.data[i] -= y_l.data[i];
    Sinogram back = conv_adjoint_sino(
        conv_adjoint_sino(conv_adjoint_sino(upsample_det(res), p.c3), p.c2),
        p.c1);
    Image sr_want = fbp(back, hr, n, ps);
    Image sr_got = sr_fidelity_grad(x, y_l, p, hr);
    CHECK(sr_got.data == sr_want.data);

    Image x_l = fbp(y_l, hr.lr_counterpart(), n, ps);
    Image blur = conv_img(conv_img(conv_img(x, p.b1), p.b2), p.b3);
    for (size_t i = 0; i < blur.size(); ++i) blur.data[i] -= x_l.data[i];
    Image de_want = conv_adjoint_img(
        conv_adjoint_img(conv_adjoint_img(blur, p.b3), p.b2), p.b1);
    Image de_got = deblur_fidelity_grad(x, x_l, p);
    CHECK(de_got.data == de_want.data);
}

TEST_CASE("the deblur direction with symmetric kernels is positive semidefinite") {
    BlockParams p = reference_params(11).blocks[0];
    Kernel2D sym;
    sym.taps = {0.1, 0.2, 0.1, 0.2, 0.5, 0.2, 0.1, 0.2, 0.1};
    p.b1 = p.b2 = p.b3 = sym;
    Image zero(8, 1.0);
    for (uint32_t seed = 311; seed < 316; ++seed) {
        Image x = random_image(8, 1.0, seed);
        Image gx = deblur_fidelity_grad(x, zero, p);
        double quad = 0.0;
        for (size_t i = 0; i < x.size(); ++i) quad += x.data[i] * gx.data[i];
        CHECK(quad >= -1e-12);
    }
}

TEST_CASE("block outputs are never negative") {
    Geometry hr = Geometry::uniform(10, 24, 1.0);
    Sinogram y_l = toy_measurement(hr, 12, 1.0, 321);
    Image x_l = fbp(y_l, hr.lr_counterpart(), 12, 1.0);
    for (uint64_t seed = 1; seed < 4; ++seed) {
        BlockParams p = reference_params(seed).blocks[0];
        p.lambda1 = 3.0;  // deliberately aggressive steps
        p.lambda2 = -2.0;
        Image x = random_image(12, 1.0, (uint32_t)seed + 400);
        Image out = sadir_block(x, y_l, x_l, p, hr);
        for (double v : out.data) CHECK(v >= 0.0);
    }
}

TEST_CASE("the forward pass is the block cascade and is deterministic") {
    Geometry hr = Geometry::uniform(10, 28, 0.8);
    const int n = 14;
    const double ps = 0.7;
    NetParams params = reference_params(12, 3);
    Sinogram y_l = toy_measurement(hr, n, ps, 331);

    NetForwardResult r = net_forward(y_l, params, hr, n, ps);
    CHECK(r.tape.blocks.size() == 3);

    Image x = init_input(y_l, hr, n, ps);
    Image x_l = fbp(y_l, hr.lr_counterpart(), n, ps);
    for (int t = 0; t < 3; ++t)
        x = sadir_block(x, y_l, x_l, params.blocks[(size_t)t], hr);
    CHECK(r.x.data == x.data);

    Image again = net_apply(y_l, params, hr, n, ps);
    CHECK(again.data == r.x.data);
}

TEST_CASE("zero mixing weights make the network the clamped initialization") {
    Geometry hr = Geometry::uniform(8, 20, 1.0);
    const int n = 10;
    NetParams params = reference_params(13, 3);
    for (auto& b : params.blocks) b.lambda1 = b.lambda2 = b.lambda3 = 0.0;
    Sinogram y_l = toy_measurement(hr, n, 1.0, 332);

    Image out = net_apply(y_l, params, hr, n, 1.0);
    Image x0 = init_input(y_l, hr, n, 1.0);
    for (size_t i = 0; i < out.size(); ++i)
        CHECK(out.data[i] == std::max(0.0, x0.data[i]));
}

TEST_CASE("zero upstream gradient produces zero parameter gradients") {
    Geometry hr = Geometry::uniform(8, 20, 1.0);
    const int n = 10;
    NetParams params = reference_params(14, 2);
    Sinogram y_l = toy_measurement(hr, n, 1.0, 333);
    NetForwardResult r = net_forward(y_l, params, hr, n, 1.0);
    Image zero(n, 1.0);
    NetParams grads = net_backward(r.tape, params, zero);
    for (double v : flatten_params(grads)) CHECK(v == 0.0);
}

TEST_CASE("reverse-mode gradients match finite differences on a toy instance") {
    Geometry hr = Geometry::uniform(8, 24, 1.0);
    const int n = 12;
    NetParams params = reference_params(15, 1);
    Sinogram y_l = toy_measurement(hr, n, 1.0, 334);

    // Scalar probe: s(theta) = <c, net(theta)>.
    Image c = random_image(n, 1.0, 335);
    NetForwardResult r = net_forward(y_l, params, hr, n, 1.0);
    NetParams grads = net_backward(r.tape, params, c);

    std::vector<double> flat = flatten_params(params);
    std::vector<double> gflat = flatten_params(grads);
    std::vector<std::string> names = param_names(params);
    const double h = 1e-6;
    for (size_t i = 0; i < flat.size(); ++i) {
        std::vector<double> fp = flat, fm = flat;
        fp[i] += h;
        fm[i] -= h;
        NetParams pp = zeros_like(params), pm = zeros_like(params);
        unflatten_params(fp, pp);
        unflatten_params(fm, pm);
        double sp = 0.0, sm = 0.0;
        Image xp = net_apply(y_l, pp, hr, n, 1.0);
        Image xm = net_apply(y_l, pm, hr, n, 1.0);
        for (size_t j = 0; j < c.size(); ++j) {
            sp += c.data[j] * xp.data[j];
            sm += c.data[j] * xm.data[j];
        }
        double fd = (sp - sm) / (2.0 * h);
        INFO("parameter ", names[i]);
        CHECK(rel_err(gflat[i], fd, 1e-8) < 3e-4);
    }
}

TEST_CASE("the mixing-weight gradient is the masked correlation with its direction") {
    Geometry hr = Geometry::uniform(8, 20, 1.0);
    const int n = 10;
    NetParams params = reference_params(16, 1);
    const BlockParams& p = params.blocks[0];
    Sinogram y_l = toy_measurement(hr, n, 1.0, 336);

    Image c = random_image(n, 1.0, 337);
    NetForwardResult r = net_forward(y_l, params, hr, n, 1.0);
    NetParams grads = net_backward(r.tape, params, c);

    Image x0 = init_input(y_l, hr, n, 1.0);
    Image x_l = fbp(y_l, hr.lr_counterpart(), n, 1.0);
    Image sr = sr_fidelity_grad(x0, y_l, p, hr);
    Image de = deblur_fidelity_grad(x0, x_l, p);
    std::vector<FoeChannel> ch(p.channels.begin(), p.channels.end());
    Image fo = foe_apply(x0, ch);

    double want = 0.0;
    for (size_t i = 0; i < c.size(); ++i) {
        double pre = x0.data[i] - p.lambda1 * sr.data[i] -
                     p.lambda2 * de.data[i] - p.lambda3 * fo.data[i];
        if (pre > 0.0) want -= c.data[i] * de.data[i];
    }
    CHECK(rel_err(grads.blocks[0].lambda2, want, 1e-12) < 1e-12);
}

TEST_CASE("shared blocks reuse one parameter set across iterations") {
    Geometry hr = Geometry::uniform(8, 20, 1.0);
    const int n = 10;
    Sinogram y_l = toy_measurement(hr, n, 1.0, 338);

    NetParams shared = reference_params(17, 1);
    shared.shared = true;
    shared.shared_iterations = 2;

    NetParams unrolled = reference_params(17, 2);
    unrolled.blocks[1] = unrolled.blocks[0] = shared.blocks[0];

    Image a = net_apply(y_l, shared, hr, n, 1.0);
    Image b = net_apply(y_l, unrolled, hr, n, 1.0);
    CHECK(a.data == b.data);

    // Shared gradients accumulate what the unrolled copies receive.
    Image c = random_image(n, 1.0, 339);
    NetForwardResult rs = net_forward(y_l, shared, hr, n, 1.0);
    NetForwardResult ru = net_forward(y_l, unrolled, hr, n, 1.0);
    NetParams gs = net_backward(rs.tape, shared, c);
    NetParams gu = net_backward(ru.tape, unrolled, c);
    std::vector<double> gsf = flatten_params(gs);
    std::vector<double> guf = flatten_params(gu);
    for (size_t i = 0; i < gsf.size(); ++i)
        CHECK(gsf[i] ==
              doctest::Approx(guf[i] + guf[i + gsf.size()]).epsilon(1e-12));
}

TEST_CASE("parameters carry no geometry and transfer across scales") {
    NetParams params = reference_params(18, 3);
    Geometry small = Geometry::uniform(8, 16, 1.0);
    Geometry big = Geometry::uniform(8, 32, 0.5);
    Sinogram ys = toy_measurement(small, 8, 1.0, 341);
    Sinogram yb = toy_measurement(big, 16, 0.5, 342);
    Image a = net_apply(ys, params, small, 8, 1.0);
    Image b = net_apply(yb, params, big, 16, 0.5);
    CHECK(a.n == 8);
    CHECK(b.n == 16);
}
