#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sadir/loss.hpp"
#include "sadir/net.hpp"

namespace sadir {

/// Everything a zero-shot training run needs. The defaults are the reference
/// settings; only the seed normally varies between runs.
struct TrainConfig {
    double learning_rate = 1e-5;
    int epochs = 500;
    uint64_t seed = 0;
    int n_blocks = 3;            // unrolled iterations
    bool shared_blocks = false;  // one parameter set reused every iteration
    int ssim_window = 11;
    double eps1 = 0.01;
    double eps2 = 0.03;
    double L_range = 0.082;
    bool l2_mean = false;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double init_std = 0.05;
    double noise_std = 0.0;  // optional Gaussian noise on the simulated LR data

    LossConfig loss() const {
        LossConfig c;
        c.ssim_window = ssim_window;
        c.eps1 = eps1;
        c.eps2 = eps2;
        c.L_range = L_range;
        c.l2_mean = l2_mean;
        return c;
    }

    void validate() const {
        detail::require(learning_rate > 0.0, "train: learning_rate > 0");
        detail::require(epochs >= 0, "train: epochs >= 0");
        detail::require(n_blocks >= 1, "train: n_blocks >= 1");
        detail::require(adam_beta1 >= 0.0 && adam_beta1 < 1.0,
                        "train: adam_beta1 in [0,1)");
        detail::require(adam_beta2 >= 0.0 && adam_beta2 < 1.0,
                        "train: adam_beta2 in [0,1)");
        detail::require(adam_eps > 0.0, "train: adam_eps > 0");
        detail::require(init_std > 0.0, "train: init_std > 0");
        detail::require(noise_std >= 0.0, "train: noise_std >= 0");
        loss().validate();
    }
};

/// First/second-moment accumulators for Adam over the flat parameter vector.
struct AdamState {
    std::vector<double> m, v;
    long step = 0;

    AdamState() = default;
    explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, const TrainConfig& cfg);

/// Self-supervised training pair derived from the measured sinogram alone:
/// x_ref = FBP of the measurement, y_l = reprojection of x_ref onto the
/// half-resolution detector (plus optional noise).
struct ZslPair {
    Sinogram y_l;
    Image x_ref;
};

ZslPair build_zsl_pair(const Sinogram& y, const Geometry& geom, int n,
                       double pixel_size, const TrainConfig& cfg);

/// Reference parameter initialization: mixing weights 0.1, kernel taps and
/// expert weights ~ N(0, init_std²) from one seeded stream, expert means on
/// a fixed symmetric grid, log-variances at ln(1e-4).
NetParams init_net_params(const TrainConfig& cfg);

struct TrainResult {
    NetParams params;
    std::vector<double> loss_history;  // loss at each epoch, before the update
};

/// Zero-shot training on one measured sinogram. `n`/`pixel_size` give the
/// grid of the FBP reference, i.e. the native resolution of the measurement.
/// Progress lines go to `log` when non-null.
TrainResult train(const Sinogram& y, const Geometry& geom, int n,
                  double pixel_size, const TrainConfig& cfg,
                  std::ostream* log = nullptr);

/// Apply trained parameters one scale above the measurement: the sinogram
/// that played the low-resolution role during training is now the input, and
/// the output grid is typically (2n)² at half the pixel size.
Image reconstruct(const Sinogram& y, const NetParams& params,
                  const Geometry& geom, int out_n, double out_pixel_size);

}  // namespace sadir
