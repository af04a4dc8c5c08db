#include "sadir/projector.hpp"

#include <algorithm>
#include <cmath>

#include "sadir/parallel.hpp"

namespace sadir {
namespace {

// One quadrature lattice per (image, geometry) pair: rays of every view use
// the same number of samples N and spacing `step`, with sample k at signed
// ray coordinate u_k = (k - (N-1)/2)*step. The symmetric lattice makes
// opposite rays sample mirrored positions exactly.
struct Sampling {
    int n_samples;
    double step;  // quadrature weight, mm
};

Sampling make_sampling(const Geometry&, int n, double pixel_size) {
    double span = n * pixel_size * std::sqrt(2.0);
    // Half-pixel quadrature: the bilinear image field is resolved at any
    // step <= pixel_size; lateral ray positions are exact regardless.
    double nominal = 0.5 * pixel_size;
    int n_samples = std::max(1, (int)std::ceil(span / nominal - 1e-12));
    return {n_samples, span / n_samples};
}

// Sample k of a ray sits at pixel-index coordinates
//   column fx0 + k*dfx, row fy0 + k*dfy.
// Both the projector and its adjoint evaluate these exact expressions, so
// the two sides see identical interpolation weights.
struct RayPath {
    double fx0, dfx;
    double fy0, dfy;
};

RayPath make_path(double cosv, double sinv, double s, const Sampling& sp,
                  int n, double inv_ps) {
    double u0 = -0.5 * (sp.n_samples - 1) * sp.step;
    double x0 = s * cosv - u0 * sinv;
    double y0 = s * sinv + u0 * cosv;
    double c = 0.5 * (n - 1);
    RayPath p;
    p.fx0 = x0 * inv_ps + c;
    p.dfx = -sp.step * sinv * inv_ps;
    p.fy0 = c - y0 * inv_ps;
    p.dfy = -sp.step * cosv * inv_ps;
    return p;
}

struct KRange {
    int lo, hi;  // half-open
};

// Conservative superset of sample indices k in [0,N) whose coordinate
// a0 + k*da falls in [vmin, vmax]; anything outside contributes nothing.
KRange clip_range(double a0, double da, double vmin, double vmax, int N) {
    if (std::abs(da) < 1e-30) {
        bool inside = a0 >= vmin - 1.0 && a0 <= vmax + 1.0;
        return inside ? KRange{0, N} : KRange{0, 0};
    }
    double k1 = (vmin - a0) / da;
    double k2 = (vmax - a0) / da;
    if (k1 > k2) std::swap(k1, k2);
    // Clamp in double before the int conversion: a near-tangent ray puts
    // k1/k2 far outside int range, and float->int overflow is undefined.
    double lo_d = std::max(k1 - 1.0, 0.0);
    double hi_d = std::min(k2 + 2.0, (double)N);
    if (!(lo_d < hi_d)) return {0, 0};
    return {(int)lo_d, (int)hi_d};
}

KRange intersect(KRange a, KRange b) {
    KRange r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (r.hi < r.lo) r.hi = r.lo;
    return r;
}

// Clipped sample coordinates stay within (-3, n+2): the clip superset can
// overshoot the [-1, n] window by two steps of |d| <= 0.5 plus the floor()
// in its bounds, so cell indices span [-3, n+2] after the +1 neighbor. A
// 3-cell zero margin on each side therefore makes every bilinear access
// in-bounds: loads hit real zeros exactly where a checked form would have
// substituted 0.0, and halo writes land in discarded padding.
constexpr int kPad = 3;

inline double gather(const double* padded, int stride, double fx, double fy) {
    double fj = std::floor(fx);
    double fi = std::floor(fy);
    double wx = fx - fj;
    double wy = fy - fi;
    const double* r =
        padded + ((size_t)((int)fi + kPad)) * (size_t)stride + ((int)fj + kPad);
    double top = (1.0 - wx) * r[0] + wx * r[1];
    double bot = (1.0 - wx) * r[stride] + wx * r[stride + 1];
    return (1.0 - wy) * top + wy * bot;
}

inline void splat(double* strip, int stride, int base_row, double fx,
                  double fy, double val) {
    double fj = std::floor(fx);
    double fi = std::floor(fy);
    double wx = fx - fj;
    double wy = fy - fi;
    double* r = strip + ((size_t)((int)fi - base_row)) * (size_t)stride +
                ((int)fj + kPad);
    double w0 = (1.0 - wy) * val;
    double w1 = wy * val;
    r[0] += (1.0 - wx) * w0;
    r[1] += wx * w0;
    r[stride] += (1.0 - wx) * w1;
    r[stride + 1] += wx * w1;
}

}  // namespace

Sinogram forward_project(const Image& img, const Geometry& geom) {
    img.validate();
    geom.validate();
    detail::require(img.n >= 2, "forward_project: image side >= 2");

    Sinogram out(geom.n_views(), geom.n_det, geom.det_spacing);
    Sampling sp = make_sampling(geom, img.n, img.pixel_size);
    const int n = img.n;
    const double inv_ps = 1.0 / img.pixel_size;

    const int stride = n + 2 * kPad;
    std::vector<double> padded((size_t)stride * (size_t)stride, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* src = img.data.data() + (size_t)i * (size_t)n;
        double* dst = padded.data() + (size_t)(i + kPad) * (size_t)stride + kPad;
        std::copy(src, src + n, dst);
    }
    const double* data = padded.data();

    parallel_for(geom.n_views(), [&](int v) {
        double cosv = std::cos(geom.angles[v]);
        double sinv = std::sin(geom.angles[v]);
        double* row = out.row(v);
        for (int d = 0; d < geom.n_det; ++d) {
            RayPath p = make_path(cosv, sinv, geom.det_coord(d), sp, n, inv_ps);
            KRange r = intersect(
                clip_range(p.fx0, p.dfx, -1.0, (double)n, sp.n_samples),
                clip_range(p.fy0, p.dfy, -1.0, (double)n, sp.n_samples));
            double acc = 0.0;
            for (int k = r.lo; k < r.hi; ++k)
                acc += gather(data, stride, p.fx0 + k * p.dfx,
                              p.fy0 + k * p.dfy);
            row[d] = acc * sp.step;
        }
    });
    return out;
}

Image back_project(const Sinogram& sino, const Geometry& geom, int n,
                   double pixel_size) {
    sino.validate();
    geom.validate();
    detail::require(sino.shape_matches(geom),
                    "back_project: sinogram/geometry shape mismatch");
    detail::require(n >= 2 && pixel_size > 0.0, "back_project: bad grid");

    Image out(n, pixel_size);
    Sampling sp = make_sampling(geom, n, pixel_size);
    const double inv_ps = 1.0 / pixel_size;
    const int stride = n + 2 * kPad;

    parallel_ranges(n, [&](int row_lo, int row_hi) {
        // Private strip with a discarded halo: every splat lands in-bounds,
        // and the rows this worker owns receive exactly the additions the
        // row-guarded form would have made, in the same order.
        const int base_row = row_lo - kPad;
        const int strip_rows = (row_hi - row_lo) + 2 * kPad;
        std::vector<double> strip((size_t)strip_rows * (size_t)stride, 0.0);
        for (int v = 0; v < geom.n_views(); ++v) {
            double cosv = std::cos(geom.angles[v]);
            double sinv = std::sin(geom.angles[v]);
            const double* row = sino.row(v);
            for (int d = 0; d < geom.n_det; ++d) {
                RayPath p =
                    make_path(cosv, sinv, geom.det_coord(d), sp, n, inv_ps);
                KRange r = intersect(
                    clip_range(p.fx0, p.dfx, -1.0, (double)n, sp.n_samples),
                    clip_range(p.fy0, p.dfy, row_lo - 1.0, (double)row_hi,
                               sp.n_samples));
                if (r.lo >= r.hi) continue;
                double val = row[d] * sp.step;
                for (int k = r.lo; k < r.hi; ++k)
                    splat(strip.data(), stride, base_row, p.fx0 + k * p.dfx,
                          p.fy0 + k * p.dfy, val);
            }
        }
        for (int i = row_lo; i < row_hi; ++i) {
            const double* src =
                strip.data() + (size_t)(i - base_row) * (size_t)stride + kPad;
            std::copy(src, src + n, out.data.data() + (size_t)i * (size_t)n);
        }
    });
    return out;
}

}  // namespace sadir
