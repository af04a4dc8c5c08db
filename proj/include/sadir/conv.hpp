#pragma once

#include <array>

#include "sadir/types.hpp"

namespace sadir {

/// 3-tap kernel for detector-axis (sinogram) convolutions.
struct Kernel1D {
    std::array<double, 3> taps{};
};

/// 3×3 kernel for image convolutions, row-major.
struct Kernel2D {
    std::array<double, 9> taps{};

    double& at(int i, int j) { return taps[(size_t)(3 * i + j)]; }
    double at(int i, int j) const { return taps[(size_t)(3 * i + j)]; }
};

Kernel1D rotate180(const Kernel1D& k);
Kernel2D rotate180(const Kernel2D& k);

/// Per-view 1-D "same" convolution along the detector axis, zero padded,
/// flip convention: out[i] = Σ_o taps[o+1]·in[i−o].
Sinogram conv_sino(const Sinogram& s, const Kernel1D& k);

/// 2-D "same" convolution, zero padded, flip convention.
Image conv_img(const Image& x, const Kernel2D& k);

/// Transpose of conv with the same kernel: convolution with rotate180(k).
Sinogram conv_adjoint_sino(const Sinogram& s, const Kernel1D& k);
Image conv_adjoint_img(const Image& x, const Kernel2D& k);

/// ∂⟨g_out, k∗x⟩/∂k: the valid cross-correlation of x with g_out
/// restricted to the kernel support.
Kernel1D conv_kernel_grad(const Sinogram& x, const Sinogram& g_out);
Kernel2D conv_kernel_grad(const Image& x, const Image& g_out);

}  // namespace sadir
