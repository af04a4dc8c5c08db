#include "sadir/train.hpp"

#include <cmath>
#include <utility>

#include "sadir/fbp.hpp"
#include "sadir/projector.hpp"
#include "sadir/rng.hpp"

namespace sadir {

void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, const TrainConfig& cfg) {
    detail::require(params.size() == grads.size() &&
                        params.size() == state.m.size() &&
                        params.size() == state.v.size(),
                    "adam_step: size mismatch");
    state.step += 1;
    const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
    const double bc1 = 1.0 - std::pow(b1, (double)state.step);
    const double bc2 = 1.0 - std::pow(b2, (double)state.step);
    for (size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        const double mh = state.m[i] / bc1;
        const double vh = state.v[i] / bc2;
        params[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.adam_eps);
    }
}

ZslPair build_zsl_pair(const Sinogram& y, const Geometry& geom, int n,
                       double pixel_size, const TrainConfig& cfg) {
    cfg.validate();
    geom.validate();
    detail::require(y.shape_matches(geom),
                    "build_zsl_pair: sinogram does not match geometry");
    ZslPair pair;
    pair.x_ref = fbp(y, geom, n, pixel_size);
    pair.y_l = forward_project(pair.x_ref, geom.lr_counterpart());
    if (cfg.noise_std > 0.0) {
        // Salted so the noise stream is independent of the kernel-init stream.
        GaussianSampler gauss(cfg.seed ^ 0x5e5a9d2fb30c11d7ULL);
        for (double& v : pair.y_l.data) v += gauss.next(0.0, cfg.noise_std);
    }
    return pair;
}

NetParams init_net_params(const TrainConfig& cfg) {
    cfg.validate();
    NetParams p;
    p.shared = cfg.shared_blocks;
    p.shared_iterations = cfg.n_blocks;
    p.blocks.assign(cfg.shared_blocks ? 1 : (size_t)cfg.n_blocks,
                    BlockParams{});
    GaussianSampler gauss(cfg.seed);
    const double mu_init[4] = {-0.01, -1.0 / 300.0, 1.0 / 300.0, 0.01};
    for (BlockParams& b : p.blocks) {
        b.lambda1 = b.lambda2 = b.lambda3 = 0.1;
        for (auto* k : {&b.c1, &b.c2, &b.c3})
            for (double& t : k->taps) t = gauss.next(0.0, cfg.init_std);
        for (auto* k : {&b.b1, &b.b2, &b.b3})
            for (double& t : k->taps) t = gauss.next(0.0, cfg.init_std);
        for (FoeChannel& ch : b.channels) {
            for (auto* k : {&ch.g1, &ch.g2, &ch.g3})
                for (double& t : k->taps) t = gauss.next(0.0, cfg.init_std);
            for (double& v : ch.gmm.gamma) v = gauss.next(0.0, cfg.init_std);
            for (int i = 0; i < 4; ++i) ch.gmm.mu[(size_t)i] = mu_init[i];
            for (double& v : ch.gmm.log_delta) v = std::log(1e-4);
        }
    }
    return p;
}

TrainResult train(const Sinogram& y, const Geometry& geom, int n,
                  double pixel_size, const TrainConfig& cfg,
                  std::ostream* log) {
    cfg.validate();
    ZslPair pair = build_zsl_pair(y, geom, n, pixel_size, cfg);

    NetParams params = init_net_params(cfg);
    // The block inputs derived from y_l alone never change across epochs.
    Image x0 = init_input(pair.y_l, geom, n, pixel_size);
    Image x_l = fbp(pair.y_l, geom.lr_counterpart(), n, pixel_size);

    AdamState state(param_count(params));
    std::vector<double> flat = flatten_params(params);
    const LossConfig lcfg = cfg.loss();

    TrainResult res;
    res.loss_history.reserve((size_t)cfg.epochs);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        NetTape tape;
        Image x = net_apply(pair.y_l, params, geom, n, pixel_size, &x0, &x_l,
                            &tape);
        Image dloss(n, pixel_size);
        double loss = joint_loss_with_grad(x, pair.x_ref, lcfg, &dloss);
        if (!std::isfinite(loss))
            throw NumericError("non-finite loss at epoch " +
                               std::to_string(epoch));
        res.loss_history.push_back(loss);

        NetParams grads = net_backward(tape, params, dloss);
        std::vector<double> gflat = flatten_params(grads);
        for (size_t i = 0; i < gflat.size(); ++i)
            if (!std::isfinite(gflat[i]))
                throw NumericError("non-finite gradient for " +
                                   param_names(grads)[i] + " at epoch " +
                                   std::to_string(epoch));

        adam_step(flat, gflat, state, cfg);
        for (size_t i = 0; i < flat.size(); ++i)
            if (!std::isfinite(flat[i]))
                throw NumericError("non-finite value of " +
                                   param_names(params)[i] +
                                   " after the update at epoch " +
                                   std::to_string(epoch));
        unflatten_params(flat, params);

        if (log && (epoch % 25 == 0 || epoch + 1 == cfg.epochs))
            *log << "epoch " << epoch << " loss " << loss << "\n";
    }
    res.params = std::move(params);
    return res;
}

Image reconstruct(const Sinogram& y, const NetParams& params,
                  const Geometry& geom, int out_n, double out_pixel_size) {
    detail::require(y.shape_matches(geom),
                    "reconstruct: sinogram does not match geometry");
    return net_apply(y, params, geom.hr_counterpart(), out_n, out_pixel_size);
}

}  // namespace sadir
