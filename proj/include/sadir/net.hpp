#pragma once

#include <array>
#include <string>
#include <vector>

#include "sadir/conv.hpp"
#include "sadir/foe.hpp"
#include "sadir/types.hpp"

namespace sadir {

/// Learnable quantities of one unrolled block: step scalars for the three
/// descent directions, the sinogram blur cascade c1..c3, the image blur
/// cascade b1..b3, and four prior channels.
struct BlockParams {
    double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
    Kernel1D c1, c2, c3;
    Kernel2D b1, b2, b3;
    std::array<FoeChannel, 4> channels;
};

/// The unrolled network: one BlockParams per iteration (default 3,
/// unshared). With `shared` set, a single BlockParams is reused for
/// `shared_iterations` iterations and its gradient accumulates across them.
struct NetParams {
    std::vector<BlockParams> blocks;
    bool shared = false;
    int shared_iterations = 3;

    int iterations() const {
        return shared ? shared_iterations : (int)blocks.size();
    }
    const BlockParams& block_at(int t) const {
        return blocks[(size_t)(shared ? 0 : t)];
    }
    void validate() const {
        detail::require(!blocks.empty(), "net: at least one block");
        detail::require(!shared || blocks.size() == 1,
                        "net: shared mode uses a single block");
        detail::require(!shared || shared_iterations >= 1,
                        "net: shared_iterations >= 1");
    }
};

/// Number of scalars per block: 3 λ + 9 (1-D taps) + 27 (2-D taps)
/// + 4·(27 filter taps + 12 mixture values) = 195.
inline constexpr int kScalarsPerBlock = 195;

size_t param_count(const NetParams& p);

/// Canonical flat order (the checkpoint and optimizer contract): per block,
/// λ1 λ2 λ3; c1,c2,c3 taps; b1,b2,b3 row-major; channels k=0..3 each
/// g1,g2,g3 row-major then γ[0..3], μ[0..3], log_delta[0..3].
std::vector<double> flatten_params(const NetParams& p);
void unflatten_params(const std::vector<double>& flat, NetParams& p);
std::vector<std::string> param_names(const NetParams& p);

/// Zero-valued gradient holder with the same block structure as p.
NetParams zeros_like(const NetParams& p);

/// x₀ = fbp(upsample_det(y_l)) on the requested grid, the network input.
Image init_input(const Sinogram& y_l, const Geometry& hr_geom, int n,
                 double pixel_size);

/// First descent direction of a block:
/// fbp( c̄1∗c̄2∗c̄3∗ D↑( D↓(c3∗c2∗c1∗ A x_t) − y_l ) ).
Image sr_fidelity_grad(const Image& x_t, const Sinogram& y_l,
                       const BlockParams& p, const Geometry& hr_geom);

/// Second descent direction: b̄1∗b̄2∗b̄3∗( b3∗b2∗b1∗x_t − x_l ),
/// with x_l the low-resolution reconstruction on the same grid as x_t.
Image deblur_fidelity_grad(const Image& x_t, const Image& x_l,
                           const BlockParams& p);

/// One unrolled iteration:
/// max(0, x_t − λ1·sr − λ2·deblur − λ3·foe_apply(x_t)).
Image sadir_block(const Image& x_t, const Sinogram& y_l, const Image& x_l,
                  const BlockParams& p, const Geometry& hr_geom);

/// Everything the reverse pass reads back. Stages are named after the value
/// they hold (e.g. `up` = upsampled residual).
struct ChannelTape {
    Image r1, r2, r3, phi, e3, e2;
};
struct BlockTape {
    Image x_in;
    Sinogram ax, c1s, c2s, up, a3, a2;
    Image sr_out;
    Image d1, d2, dres, f1, f2, deblur_out;
    std::array<ChannelTape, 4> ch;
    Image foe_out;
    Image pre;  // clamp input; the clamp mask is pre > 0
};
struct NetTape {
    Geometry hr_geom;
    int n = 0;
    double pixel_size = 0.0;
    std::vector<BlockTape> blocks;
};

struct NetForwardResult {
    Image x;
    NetTape tape;
};

/// Full forward pass: x₀ = init_input(y_l); x_l = fbp of y_l on its own
/// (low-resolution) geometry reconstructed onto the same grid; then the
/// unrolled blocks. y_l must conform to the LR counterpart of hr_geom.
NetForwardResult net_forward(const Sinogram& y_l, const NetParams& params,
                             const Geometry& hr_geom, int n,
                             double pixel_size);

/// Forward pass without tape recording (for inference), with optional reuse
/// of precomputed x₀/x_l (both depend only on y_l and the grid).
Image net_apply(const Sinogram& y_l, const NetParams& params,
                const Geometry& hr_geom, int n, double pixel_size,
                const Image* x0_cached = nullptr,
                const Image* xl_cached = nullptr, NetTape* tape = nullptr);

/// Exact reverse-mode gradients of a scalar loss with upstream derivative
/// dloss_dx: every linear operator back-propagates through its adjoint, φ
/// through its analytic partials, and the clamp through 1{pre > 0}.
NetParams net_backward(const NetTape& tape, const NetParams& params,
                       const Image& dloss_dx);

}  // namespace sadir
