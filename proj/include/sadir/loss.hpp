#pragma once

#include "sadir/types.hpp"

namespace sadir {

struct LossConfig {
    int ssim_window = 11;
    double eps1 = 0.01;       // k1 in c1 = (eps1·L_range)²
    double eps2 = 0.03;       // k2 in c2 = (eps2·L_range)²
    double L_range = 0.082;   // attenuation dynamic range, mm⁻¹
    bool l2_mean = false;     // default: plain sum of squared differences

    void validate() const {
        detail::require(ssim_window >= 3 && ssim_window % 2 == 1,
                        "loss: ssim_window must be odd and >= 3");
        detail::require(L_range > 0.0, "loss: L_range > 0");
    }
};

/// Mean structural similarity over all fully-contained ssim_window² sliding
/// windows (uniform box statistics, biased 1/N moments),
/// c1 = (eps1·L_range)², c2 = (eps2·L_range)². Result in [−1, 1].
double ssim(const Image& p, const Image& q, const LossConfig& cfg);

/// As ssim, optionally filling d(ssim)/dp.
double ssim_with_grad(const Image& p, const Image& q, const LossConfig& cfg,
                      Image* dssim_dp);

/// √(1 + Σ(x−ref)²) · (1 − ssim(x, ref)); squared-difference term switches
/// to a mean when cfg.l2_mean is set.
double joint_loss(const Image& x, const Image& ref, const LossConfig& cfg);

/// As joint_loss, optionally filling d(loss)/dx.
double joint_loss_with_grad(const Image& x, const Image& ref,
                            const LossConfig& cfg, Image* dloss_dx);

}  // namespace sadir
