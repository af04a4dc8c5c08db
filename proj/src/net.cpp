#include "sadir/net.hpp"

#include <cmath>
#include <utility>

#include "sadir/fbp.hpp"
#include "sadir/projector.hpp"
#include "sadir/resample.hpp"

namespace sadir {
namespace {

// Canonical scalar enumeration of one block; every consumer of the flat
// layout (checkpoints, the optimizer, gradient flattening) goes through
// this single definition.
template <class B, class F>
void visit_block(B& b, F&& f) {
    f(b.lambda1);
    f(b.lambda2);
    f(b.lambda3);
    for (auto* k : {&b.c1, &b.c2, &b.c3})
        for (auto& t : k->taps) f(t);
    for (auto* k : {&b.b1, &b.b2, &b.b3})
        for (auto& t : k->taps) f(t);
    for (auto& ch : b.channels) {
        for (auto* k : {&ch.g1, &ch.g2, &ch.g3})
            for (auto& t : k->taps) f(t);
        for (auto& v : ch.gmm.gamma) f(v);
        for (auto& v : ch.gmm.mu) f(v);
        for (auto& v : ch.gmm.log_delta) f(v);
    }
}

void add_into(Image& acc, const Image& x) {
    for (size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += x.data[i];
}

Image scaled(const Image& x, double s) {
    Image out(x.n, x.pixel_size);
    for (size_t i = 0; i < x.data.size(); ++i) out.data[i] = s * x.data[i];
    return out;
}

void add_kgrad(Kernel1D& acc, const Sinogram& input, const Sinogram& g) {
    Kernel1D kg = conv_kernel_grad(input, g);
    for (int i = 0; i < 3; ++i) acc.taps[(size_t)i] += kg.taps[(size_t)i];
}

void add_kgrad(Kernel2D& acc, const Image& input, const Image& g) {
    Kernel2D kg = conv_kernel_grad(input, g);
    for (int i = 0; i < 9; ++i) acc.taps[(size_t)i] += kg.taps[(size_t)i];
}

}  // namespace

size_t param_count(const NetParams& p) {
    return p.blocks.size() * (size_t)kScalarsPerBlock;
}

std::vector<double> flatten_params(const NetParams& p) {
    std::vector<double> flat;
    flat.reserve(param_count(p));
    for (const BlockParams& b : p.blocks)
        visit_block(b, [&](const double& v) { flat.push_back(v); });
    return flat;
}

void unflatten_params(const std::vector<double>& flat, NetParams& p) {
    detail::require(flat.size() == param_count(p),
                    "unflatten_params: size mismatch");
    size_t i = 0;
    for (BlockParams& b : p.blocks)
        visit_block(b, [&](double& v) { v = flat[i++]; });
}

std::vector<std::string> param_names(const NetParams& p) {
    std::vector<std::string> names;
    names.reserve(param_count(p));
    for (size_t t = 0; t < p.blocks.size(); ++t) {
        std::string pre = "block" + std::to_string(t) + ".";
        auto push = [&](const std::string& s) { names.push_back(pre + s); };
        for (const char* l : {"lambda1", "lambda2", "lambda3"}) push(l);
        for (const char* k : {"c1", "c2", "c3"})
            for (int i = 0; i < 3; ++i)
                push(std::string(k) + "[" + std::to_string(i) + "]");
        for (const char* k : {"b1", "b2", "b3"})
            for (int i = 0; i < 9; ++i)
                push(std::string(k) + "[" + std::to_string(i) + "]");
        for (int c = 0; c < 4; ++c) {
            std::string ch = "ch" + std::to_string(c) + ".";
            for (const char* k : {"g1", "g2", "g3"})
                for (int i = 0; i < 9; ++i)
                    push(ch + k + "[" + std::to_string(i) + "]");
            for (const char* k : {"gamma", "mu", "log_delta"})
                for (int i = 0; i < 4; ++i)
                    push(ch + k + "[" + std::to_string(i) + "]");
        }
    }
    return names;
}

NetParams zeros_like(const NetParams& p) {
    NetParams z;
    z.shared = p.shared;
    z.shared_iterations = p.shared_iterations;
    z.blocks.assign(p.blocks.size(), BlockParams{});
    return z;
}

Image init_input(const Sinogram& y_l, const Geometry& hr_geom, int n,
                 double pixel_size) {
    detail::require(y_l.shape_matches(hr_geom.lr_counterpart()),
                    "init_input: sinogram does not match the LR counterpart "
                    "of the geometry");
    return fbp(upsample_det(y_l), hr_geom, n, pixel_size);
}

Image sr_fidelity_grad(const Image& x_t, const Sinogram& y_l,
                       const BlockParams& p, const Geometry& hr_geom) {
    Sinogram s = conv_sino(
        conv_sino(conv_sino(forward_project(x_t, hr_geom), p.c1), p.c2), p.c3);
    Sinogram down = downsample_det(s);
    detail::require(down.n_views == y_l.n_views && down.n_det == y_l.n_det,
                    "sr_fidelity_grad: sinogram shape mismatch");
    for (size_t i = 0; i < down.data.size(); ++i) down.data[i] -= y_l.data[i];
    Sinogram up = upsample_det(down);
    Sinogram a = conv_adjoint_sino(
        conv_adjoint_sino(conv_adjoint_sino(up, p.c3), p.c2), p.c1);
    return fbp(a, hr_geom, x_t.n, x_t.pixel_size);
}

Image deblur_fidelity_grad(const Image& x_t, const Image& x_l,
                           const BlockParams& p) {
    detail::require(x_t.n == x_l.n, "deblur_fidelity_grad: grid mismatch");
    Image d = conv_img(conv_img(conv_img(x_t, p.b1), p.b2), p.b3);
    for (size_t i = 0; i < d.data.size(); ++i) d.data[i] -= x_l.data[i];
    return conv_adjoint_img(conv_adjoint_img(conv_adjoint_img(d, p.b3), p.b2),
                            p.b1);
}

namespace {

Image run_block(const Image& x_in, const Sinogram& y_l, const Image& x_l,
                const BlockParams& p, const Geometry& geom, BlockTape* bt) {
    const int n = x_in.n;
    const double ps = x_in.pixel_size;

    // Sinogram-fidelity direction.
    Sinogram ax = forward_project(x_in, geom);
    Sinogram c1s = conv_sino(ax, p.c1);
    Sinogram c2s = conv_sino(c1s, p.c2);
    Sinogram c3s = conv_sino(c2s, p.c3);
    Sinogram down = downsample_det(c3s);
    detail::require(down.n_views == y_l.n_views && down.n_det == y_l.n_det,
                    "sadir_block: sinogram shape mismatch");
    for (size_t i = 0; i < down.data.size(); ++i) down.data[i] -= y_l.data[i];
    Sinogram up = upsample_det(down);
    Sinogram a3 = conv_adjoint_sino(up, p.c3);
    Sinogram a2 = conv_adjoint_sino(a3, p.c2);
    Sinogram a1 = conv_adjoint_sino(a2, p.c1);
    Image sr_out = fbp(a1, geom, n, ps);

    // Deblur-fidelity direction.
    detail::require(x_l.n == n, "sadir_block: x_l grid mismatch");
    Image d1 = conv_img(x_in, p.b1);
    Image d2 = conv_img(d1, p.b2);
    Image dres = conv_img(d2, p.b3);
    for (size_t i = 0; i < dres.data.size(); ++i) dres.data[i] -= x_l.data[i];
    Image f1 = conv_adjoint_img(dres, p.b3);
    Image f2 = conv_adjoint_img(f1, p.b2);
    Image deblur_out = conv_adjoint_img(f2, p.b1);

    // Prior direction.
    Image foe_out(n, ps);
    for (int k = 0; k < 4; ++k) {
        const FoeChannel& ch = p.channels[(size_t)k];
        Image r1 = conv_img(x_in, ch.g1);
        Image r2 = conv_img(r1, ch.g2);
        Image r3 = conv_img(r2, ch.g3);
        Image phi(n, ps);
        phi.data = gmm_phi(r3.data, ch.gmm);
        Image e3 = conv_adjoint_img(phi, ch.g3);
        Image e2 = conv_adjoint_img(e3, ch.g2);
        Image e1 = conv_adjoint_img(e2, ch.g1);
        add_into(foe_out, e1);
        if (bt)
            bt->ch[(size_t)k] = ChannelTape{std::move(r1), std::move(r2),
                                            std::move(r3), std::move(phi),
                                            std::move(e3), std::move(e2)};
    }

    Image pre(n, ps), out(n, ps);
    for (size_t i = 0; i < pre.data.size(); ++i) {
        double v = x_in.data[i] - p.lambda1 * sr_out.data[i] -
                   p.lambda2 * deblur_out.data[i] -
                   p.lambda3 * foe_out.data[i];
        pre.data[i] = v;
        out.data[i] = v > 0.0 ? v : 0.0;
    }

    if (bt) {
        bt->x_in = x_in;
        bt->ax = std::move(ax);
        bt->c1s = std::move(c1s);
        bt->c2s = std::move(c2s);
        bt->up = std::move(up);
        bt->a3 = std::move(a3);
        bt->a2 = std::move(a2);
        bt->sr_out = std::move(sr_out);
        bt->d1 = std::move(d1);
        bt->d2 = std::move(d2);
        bt->dres = std::move(dres);
        bt->f1 = std::move(f1);
        bt->f2 = std::move(f2);
        bt->deblur_out = std::move(deblur_out);
        bt->foe_out = std::move(foe_out);
        bt->pre = std::move(pre);
    }
    return out;
}

}  // namespace

Image sadir_block(const Image& x_t, const Sinogram& y_l, const Image& x_l,
                  const BlockParams& p, const Geometry& hr_geom) {
    return run_block(x_t, y_l, x_l, p, hr_geom, nullptr);
}

Image net_apply(const Sinogram& y_l, const NetParams& params,
                const Geometry& hr_geom, int n, double pixel_size,
                const Image* x0_cached, const Image* xl_cached,
                NetTape* tape) {
    params.validate();
    Geometry lr_geom = hr_geom.lr_counterpart();
    detail::require(y_l.shape_matches(lr_geom),
                    "net: sinogram does not match the LR counterpart of the "
                    "geometry");

    Image x = x0_cached ? *x0_cached : init_input(y_l, hr_geom, n, pixel_size);
    Image x_l = xl_cached ? *xl_cached : fbp(y_l, lr_geom, n, pixel_size);
    detail::require(x.n == n && x_l.n == n, "net: cached grid mismatch");

    const int iters = params.iterations();
    if (tape) {
        tape->hr_geom = hr_geom;
        tape->n = n;
        tape->pixel_size = pixel_size;
        tape->blocks.clear();
        tape->blocks.resize((size_t)iters);
    }
    for (int t = 0; t < iters; ++t) {
        x = run_block(x, y_l, x_l, params.block_at(t), hr_geom,
                      tape ? &tape->blocks[(size_t)t] : nullptr);
        for (double v : x.data)
            if (!std::isfinite(v))
                throw NumericError("net: non-finite image after block " +
                                   std::to_string(t));
    }
    return x;
}

NetForwardResult net_forward(const Sinogram& y_l, const NetParams& params,
                             const Geometry& hr_geom, int n,
                             double pixel_size) {
    NetForwardResult r;
    r.x = net_apply(y_l, params, hr_geom, n, pixel_size, nullptr, nullptr,
                    &r.tape);
    return r;
}

NetParams net_backward(const NetTape& tape, const NetParams& params,
                       const Image& dloss_dx) {
    params.validate();
    const int iters = params.iterations();
    detail::require((int)tape.blocks.size() == iters,
                    "net_backward: tape/params iteration mismatch");
    detail::require(dloss_dx.n == tape.n, "net_backward: gradient grid mismatch");

    NetParams grads = zeros_like(params);
    const int n = tape.n;
    const double ps = tape.pixel_size;

    Image g = dloss_dx;  // d(loss)/d(output of block t)
    for (int t = iters - 1; t >= 0; --t) {
        const BlockTape& bt = tape.blocks[(size_t)t];
        const BlockParams& p = params.block_at(t);
        BlockParams& gp = grads.blocks[(size_t)(params.shared ? 0 : t)];

        // Positivity clamp: subgradient 1{pre > 0}.
        Image gm(n, ps);
        for (size_t i = 0; i < gm.data.size(); ++i)
            gm.data[i] = bt.pre.data[i] > 0.0 ? g.data[i] : 0.0;

        gp.lambda1 -= dot(gm.data, bt.sr_out.data);
        gp.lambda2 -= dot(gm.data, bt.deblur_out.data);
        gp.lambda3 -= dot(gm.data, bt.foe_out.data);

        Image gx = gm;  // direct identity path of x_in into pre

        // Sinogram-fidelity branch transposed.
        {
            Image gsr = scaled(gm, -p.lambda1);
            Sinogram t1 = fbp_adjoint(gsr, tape.hr_geom);
            Kernel1D kg = conv_kernel_grad(bt.a2, t1);
            for (int i = 0; i < 3; ++i)
                gp.c1.taps[(size_t)(2 - i)] += kg.taps[(size_t)i];
            Sinogram t2 = conv_sino(t1, p.c1);
            kg = conv_kernel_grad(bt.a3, t2);
            for (int i = 0; i < 3; ++i)
                gp.c2.taps[(size_t)(2 - i)] += kg.taps[(size_t)i];
            Sinogram t3 = conv_sino(t2, p.c2);
            kg = conv_kernel_grad(bt.up, t3);
            for (int i = 0; i < 3; ++i)
                gp.c3.taps[(size_t)(2 - i)] += kg.taps[(size_t)i];
            Sinogram t4 = conv_sino(t3, p.c3);
            Sinogram t5 = upsample_adjoint(t4);
            Sinogram t6 = downsample_adjoint(t5);
            add_kgrad(gp.c3, bt.c2s, t6);
            Sinogram t7 = conv_adjoint_sino(t6, p.c3);
            add_kgrad(gp.c2, bt.c1s, t7);
            Sinogram t8 = conv_adjoint_sino(t7, p.c2);
            add_kgrad(gp.c1, bt.ax, t8);
            Sinogram t9 = conv_adjoint_sino(t8, p.c1);
            add_into(gx, back_project(t9, tape.hr_geom, n, ps));
        }

        // Deblur branch transposed.
        {
            Image gdb = scaled(gm, -p.lambda2);
            Kernel2D kg = conv_kernel_grad(bt.f2, gdb);
            for (int i = 0; i < 9; ++i)
                gp.b1.taps[(size_t)(8 - i)] += kg.taps[(size_t)i];
            Image u1 = conv_img(gdb, p.b1);
            kg = conv_kernel_grad(bt.f1, u1);
            for (int i = 0; i < 9; ++i)
                gp.b2.taps[(size_t)(8 - i)] += kg.taps[(size_t)i];
            Image u2 = conv_img(u1, p.b2);
            kg = conv_kernel_grad(bt.dres, u2);
            for (int i = 0; i < 9; ++i)
                gp.b3.taps[(size_t)(8 - i)] += kg.taps[(size_t)i];
            Image u3 = conv_img(u2, p.b3);
            add_kgrad(gp.b3, bt.d2, u3);
            Image u4 = conv_adjoint_img(u3, p.b3);
            add_kgrad(gp.b2, bt.d1, u4);
            Image u5 = conv_adjoint_img(u4, p.b2);
            add_kgrad(gp.b1, bt.x_in, u5);
            Image u6 = conv_adjoint_img(u5, p.b1);
            add_into(gx, u6);
        }

        // Prior branch transposed.
        {
            Image gf = scaled(gm, -p.lambda3);
            for (int k = 0; k < 4; ++k) {
                const ChannelTape& ct = bt.ch[(size_t)k];
                const FoeChannel& ch = p.channels[(size_t)k];
                FoeChannel& gch = gp.channels[(size_t)k];
                Kernel2D kg = conv_kernel_grad(ct.e2, gf);
                for (int i = 0; i < 9; ++i)
                    gch.g1.taps[(size_t)(8 - i)] += kg.taps[(size_t)i];
                Image v1 = conv_img(gf, ch.g1);
                kg = conv_kernel_grad(ct.e3, v1);
                for (int i = 0; i < 9; ++i)
                    gch.g2.taps[(size_t)(8 - i)] += kg.taps[(size_t)i];
                Image v2 = conv_img(v1, ch.g2);
                kg = conv_kernel_grad(ct.phi, v2);
                for (int i = 0; i < 9; ++i)
                    gch.g3.taps[(size_t)(8 - i)] += kg.taps[(size_t)i];
                Image v3 = conv_img(v2, ch.g3);

                GmmPhiGrads pg = gmm_phi_grads(ct.r3.data, ch.gmm);
                for (int nc = 0; nc < 4; ++nc) {
                    size_t c = (size_t)nc;
                    gch.gmm.gamma[c] += dot(v3.data, pg.dgamma[c]);
                    gch.gmm.mu[c] += dot(v3.data, pg.dmu[c]);
                    gch.gmm.log_delta[c] += dot(v3.data, pg.dlog_delta[c]);
                }
                Image v4(n, ps);
                for (size_t i = 0; i < v4.data.size(); ++i)
                    v4.data[i] = v3.data[i] * pg.dx[i];
                add_kgrad(gch.g3, ct.r2, v4);
                Image v5 = conv_adjoint_img(v4, ch.g3);
                add_kgrad(gch.g2, ct.r1, v5);
                Image v6 = conv_adjoint_img(v5, ch.g2);
                add_kgrad(gch.g1, bt.x_in, v6);
                Image v7 = conv_adjoint_img(v6, ch.g1);
                add_into(gx, v7);
            }
        }

        g = std::move(gx);
    }
    return grads;
}

}  // namespace sadir
