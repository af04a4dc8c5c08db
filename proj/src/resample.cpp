#include "sadir/resample.hpp"

namespace sadir {

Sinogram downsample_det(const Sinogram& sino) {
    sino.validate();
    detail::require(sino.n_det % 2 == 0, "downsample_det: n_det must be even");
    const int m = sino.n_det / 2;
    Sinogram out(sino.n_views, m, sino.det_spacing * 2.0);
    for (int v = 0; v < sino.n_views; ++v) {
        const double* in = sino.row(v);
        double* o = out.row(v);
        for (int d = 0; d < m; ++d) o[d] = in[2 * d];
    }
    return out;
}

Sinogram upsample_det(const Sinogram& sino) {
    sino.validate();
    detail::require(sino.n_det >= 2, "upsample_det: n_det >= 2");
    const int m = sino.n_det;
    Sinogram out(sino.n_views, 2 * m, sino.det_spacing * 0.5);
    for (int v = 0; v < sino.n_views; ++v) {
        const double* in = sino.row(v);
        double* o = out.row(v);
        for (int d = 0; d < m - 1; ++d) {
            o[2 * d] = in[d];
            o[2 * d + 1] = 0.5 * (in[d] + in[d + 1]);
        }
        o[2 * m - 2] = in[m - 1];
        o[2 * m - 1] = in[m - 1];
    }
    return out;
}

Sinogram downsample_adjoint(const Sinogram& sino) {
    sino.validate();
    Sinogram out(sino.n_views, sino.n_det * 2, sino.det_spacing * 0.5);
    for (int v = 0; v < sino.n_views; ++v) {
        const double* in = sino.row(v);
        double* o = out.row(v);
        for (int d = 0; d < sino.n_det; ++d) o[2 * d] = in[d];
    }
    return out;
}

Sinogram upsample_adjoint(const Sinogram& sino) {
    sino.validate();
    detail::require(sino.n_det % 2 == 0 && sino.n_det >= 4,
                    "upsample_adjoint: n_det must be even and >= 4");
    const int m = sino.n_det / 2;
    Sinogram out(sino.n_views, m, sino.det_spacing * 2.0);
    for (int v = 0; v < sino.n_views; ++v) {
        const double* in = sino.row(v);
        double* o = out.row(v);
        for (int d = 0; d < m; ++d) {
            double acc = in[2 * d];
            if (d >= 1) acc += 0.5 * in[2 * d - 1];
            if (d <= m - 2) acc += 0.5 * in[2 * d + 1];
            if (d == m - 1) acc += in[2 * m - 1];
            o[d] = acc;
        }
    }
    return out;
}

}  // namespace sadir
