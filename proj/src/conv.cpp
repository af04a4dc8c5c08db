#include "sadir/conv.hpp"

#include <algorithm>

namespace sadir {
namespace {

void check_finite(const std::array<double, 3>& t) {
    for (double v : t) detail::require(std::isfinite(v), "kernel: non-finite tap");
}
void check_finite(const std::array<double, 9>& t) {
    for (double v : t) detail::require(std::isfinite(v), "kernel: non-finite tap");
}

inline void conv_row(const double* in, double* out, int m, const double* t) {
    // out[i] = t[0]*in[i+1] + t[1]*in[i] + t[2]*in[i-1], zero padded
    for (int i = 0; i < m; ++i) {
        double acc = t[1] * in[i];
        if (i + 1 < m) acc += t[0] * in[i + 1];
        if (i - 1 >= 0) acc += t[2] * in[i - 1];
        out[i] = acc;
    }
}

}  // namespace

Kernel1D rotate180(const Kernel1D& k) {
    return Kernel1D{{k.taps[2], k.taps[1], k.taps[0]}};
}

Kernel2D rotate180(const Kernel2D& k) {
    Kernel2D r;
    for (int i = 0; i < 9; ++i) r.taps[(size_t)i] = k.taps[(size_t)(8 - i)];
    return r;
}

Sinogram conv_sino(const Sinogram& s, const Kernel1D& k) {
    s.validate();
    check_finite(k.taps);
    detail::require(s.n_det >= 3, "conv_sino: n_det >= 3");
    Sinogram out(s.n_views, s.n_det, s.det_spacing);
    for (int v = 0; v < s.n_views; ++v)
        conv_row(s.row(v), out.row(v), s.n_det, k.taps.data());
    return out;
}

Image conv_img(const Image& x, const Kernel2D& k) {
    x.validate();
    check_finite(k.taps);
    detail::require(x.n >= 3, "conv_img: image side >= 3");
    const int n = x.n;
    Image out(n, x.pixel_size);
    const double* t = k.taps.data();
    const double* xd = x.data.data();
    for (int i = 0; i < n; ++i) {
        const bool edge_row = i == 0 || i == n - 1;
        for (int j = 0; j < n; ++j) {
            if (!edge_row && j > 0 && j < n - 1) {
                const double* r0 = xd + (size_t)(i - 1) * n + (j - 1);
                const double* r1 = xd + (size_t)i * n + (j - 1);
                const double* r2 = xd + (size_t)(i + 1) * n + (j - 1);
                out.at(i, j) = t[8] * r0[0] + t[7] * r0[1] + t[6] * r0[2] +
                               t[5] * r1[0] + t[4] * r1[1] + t[3] * r1[2] +
                               t[2] * r2[0] + t[1] * r2[1] + t[0] * r2[2];
            } else {
                // out(i,j) = Σ_{a,b} t(a,b)·x(i+1−a, j+1−b), zero padded
                double acc = 0.0;
                for (int a = 0; a < 3; ++a) {
                    int ii = i + 1 - a;
                    if (ii < 0 || ii >= n) continue;
                    for (int b = 0; b < 3; ++b) {
                        int jj = j + 1 - b;
                        if (jj < 0 || jj >= n) continue;
                        acc += t[3 * a + b] * x.at(ii, jj);
                    }
                }
                out.at(i, j) = acc;
            }
        }
    }
    return out;
}

Sinogram conv_adjoint_sino(const Sinogram& s, const Kernel1D& k) {
    return conv_sino(s, rotate180(k));
}

Image conv_adjoint_img(const Image& x, const Kernel2D& k) {
    return conv_img(x, rotate180(k));
}

Kernel1D conv_kernel_grad(const Sinogram& x, const Sinogram& g_out) {
    detail::require(x.n_views == g_out.n_views && x.n_det == g_out.n_det,
                    "conv_kernel_grad: shape mismatch");
    Kernel1D grad;
    const int m = x.n_det;
    for (int v = 0; v < x.n_views; ++v) {
        const double* xr = x.row(v);
        const double* gr = g_out.row(v);
        double g0 = 0.0, g1 = 0.0, g2 = 0.0;
        for (int i = 0; i < m; ++i) {
            double g = gr[i];
            if (i + 1 < m) g0 += g * xr[i + 1];
            g1 += g * xr[i];
            if (i - 1 >= 0) g2 += g * xr[i - 1];
        }
        grad.taps[0] += g0;
        grad.taps[1] += g1;
        grad.taps[2] += g2;
    }
    return grad;
}

Kernel2D conv_kernel_grad(const Image& x, const Image& g_out) {
    detail::require(x.n == g_out.n, "conv_kernel_grad: shape mismatch");
    Kernel2D grad;
    const int n = x.n;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            int i_lo = std::max(0, a - 1), i_hi = std::min(n, n + a - 1);
            int j_lo = std::max(0, b - 1), j_hi = std::min(n, n + b - 1);
            double acc = 0.0;
            for (int i = i_lo; i < i_hi; ++i)
                for (int j = j_lo; j < j_hi; ++j)
                    acc += g_out.at(i, j) * x.at(i + 1 - a, j + 1 - b);
            grad.at(a, b) = acc;
        }
    }
    return grad;
}

}  // namespace sadir
