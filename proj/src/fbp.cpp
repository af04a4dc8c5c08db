#include "sadir/fbp.hpp"

#include <cmath>
#include <vector>

#include "sadir/parallel.hpp"
#include "sadir/projector.hpp"

namespace sadir {
namespace {

// Even offsets (except 0) carry zero weight, so the convolution only visits
// the center tap plus odd offsets, pairing left/right neighbors which share
// a coefficient.
void ramp_row(const double* in, double* out, int m, double h0,
              const std::vector<double>& h_odd) {
    for (int i = 0; i < m; ++i) {
        double acc = in[i] * h0;
        int kb = std::min(i, m - 1 - i);
        int k = 1;
        for (; k <= kb; k += 2)
            acc += h_odd[(size_t)(k - 1) / 2] * (in[i - k] + in[i + k]);
        for (; k <= i; k += 2)
            acc += h_odd[(size_t)(k - 1) / 2] * in[i - k];
        for (; k <= m - 1 - i; k += 2)
            acc += h_odd[(size_t)(k - 1) / 2] * in[i + k];
        out[i] = acc;
    }
}

void hann_row(const double* in, double* out, int m) {
    for (int i = 0; i < m; ++i) {
        double left = i > 0 ? in[i - 1] : 0.0;
        double right = i + 1 < m ? in[i + 1] : 0.0;
        out[i] = 0.25 * left + 0.5 * in[i] + 0.25 * right;
    }
}

double fbp_scale(const Geometry& geom, double pixel_size) {
    double r = geom.det_spacing / pixel_size;
    return kPi / geom.n_views() * r * r;
}

}  // namespace

Sinogram ramp_filter(const Sinogram& sino, FilterWindow window) {
    sino.validate();
    detail::require(sino.n_det >= 2, "ramp_filter: n_det >= 2");

    const int m = sino.n_det;
    const double ds = sino.det_spacing;
    const double h0 = 1.0 / (4.0 * ds * ds);
    std::vector<double> h_odd((size_t)(m + 1) / 2);
    for (size_t j = 0; j < h_odd.size(); ++j) {
        double k = 2.0 * j + 1.0;
        h_odd[j] = -1.0 / (kPi * k * ds * (kPi * k * ds));
    }

    Sinogram out(sino.n_views, m, ds);
    parallel_for(sino.n_views, [&](int v) {
        ramp_row(sino.row(v), out.row(v), m, h0, h_odd);
    });

    if (window == FilterWindow::hann) {
        Sinogram smoothed(sino.n_views, m, ds);
        parallel_for(sino.n_views, [&](int v) {
            hann_row(out.row(v), smoothed.row(v), m);
        });
        return smoothed;
    }
    return out;
}

Image fbp(const Sinogram& sino, const Geometry& geom, int n,
          double pixel_size, FilterWindow window) {
    detail::require(sino.shape_matches(geom),
                    "fbp: sinogram/geometry shape mismatch");
    Sinogram filtered = ramp_filter(sino, window);
    Image img = back_project(filtered, geom, n, pixel_size);
    double scale = fbp_scale(geom, pixel_size);
    for (double& v : img.data) v *= scale;
    return img;
}

Sinogram fbp_adjoint(const Image& g, const Geometry& geom,
                     FilterWindow window) {
    Sinogram s = ramp_filter(forward_project(g, geom), window);
    double scale = fbp_scale(geom, g.pixel_size);
    for (double& v : s.data) v *= scale;
    return s;
}

}  // namespace sadir
