#include "sadir/phantoms.hpp"

#include <cmath>

namespace sadir {

void PhantomSpec::validate() const {
    detail::require(n >= 16, "phantom: n >= 16");
    detail::require(pixel_size > 0.0, "phantom: pixel_size > 0");
    switch (kind) {
        case PhantomKind::shepp_logan:
            break;
        case PhantomKind::bar_pattern: {
            detail::require(bar_freqs.size() >= 4,
                            "phantom: bar_pattern needs >= 4 group "
                            "frequencies");
            const double nyquist = 1.0 / (2.0 * pixel_size);
            for (double f : bar_freqs) {
                detail::require(f > 0.0, "phantom: bar frequency > 0");
                detail::require(f <= nyquist,
                                "phantom: bar frequency above the grid "
                                "Nyquist");
            }
            detail::require(bar_contrast > 0.0 &&
                                0.0205 + bar_contrast <= 0.1,
                            "phantom: bar values must stay within [0, 0.1]");
            break;
        }
        case PhantomKind::edge:
            detail::require(edge_base >= 0.0 && edge_contrast > 0.0 &&
                                edge_base + edge_contrast <= 0.1,
                            "phantom: edge values must stay within [0, 0.1]");
            detail::require(edge_sigma_px >= 0.0, "phantom: edge_sigma >= 0");
            detail::require(std::abs(edge_angle_deg) < 45.0,
                            "phantom: edge angle must stay near vertical");
            break;
        case PhantomKind::disk:
            detail::require(disk_r > 0.0, "phantom: disk radius > 0");
            detail::require(disk_mu >= 0.0 && disk_mu <= 0.1,
                            "phantom: disk value must stay within [0, 0.1]");
            break;
    }
}

namespace {

constexpr int kSuper = 4;  // supersampling factor per axis

// Pixel (i,j) center in mm, origin at the image center, y up.
inline double px_x(int j, int n, double ps) {
    return (j + 0.5 - 0.5 * n) * ps;
}
inline double px_y(int i, int n, double ps) {
    return (0.5 * n - i - 0.5) * ps;
}

// Rasterize value(x_mm, y_mm) with 4x4 area sampling.
template <class F>
Image rasterize_supersampled(int n, double ps, F&& value) {
    Image img(n, ps);
    const double sub = ps / kSuper;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x0 = px_x(j, n, ps) - 0.5 * ps;
            const double y0 = px_y(i, n, ps) - 0.5 * ps;
            double acc = 0.0;
            for (int si = 0; si < kSuper; ++si)
                for (int sj = 0; sj < kSuper; ++sj)
                    acc += value(x0 + (sj + 0.5) * sub, y0 + (si + 0.5) * sub);
            img.at(i, j) = acc / (kSuper * kSuper);
        }
    return img;
}

struct Ellipse {
    double a;        // additive intensity
    double sx, sy;   // semi-axes, unit coords
    double x0, y0;   // center, unit coords
    double phi_deg;  // rotation
};

// The standard head phantom, intensities scaled so the 1.02 tissue level
// lands on water-equivalent 0.0205 mm^-1.
constexpr Ellipse kHeadEllipses[10] = {
    {2.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.98, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.02, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.02, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.01, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.01, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.01, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.01, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.01, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.01, 0.023, 0.046, 0.06, -0.605, 0.0},
};

Image make_shepp_logan(const PhantomSpec& spec) {
    const double scale = 0.0205 / 1.02;
    const double half = 0.5 * spec.n * spec.pixel_size;
    struct Pre {
        double c, s, x0, y0, inv_sx2, inv_sy2, a;
    };
    Pre pre[10];
    for (int k = 0; k < 10; ++k) {
        const Ellipse& e = kHeadEllipses[k];
        double phi = e.phi_deg * kPi / 180.0;
        pre[k] = {std::cos(phi), std::sin(phi),     e.x0,
                  e.y0,          1.0 / (e.sx * e.sx), 1.0 / (e.sy * e.sy),
                  e.a * scale};
    }
    return rasterize_supersampled(spec.n, spec.pixel_size,
                                  [&](double xm, double ym) {
        // unit coordinates: [-1, 1] across the image
        double x = xm / half, y = ym / half;
        double v = 0.0;
        for (int k = 0; k < 10; ++k) {
            double dx = x - pre[k].x0, dy = y - pre[k].y0;
            double xr = dx * pre[k].c + dy * pre[k].s;
            double yr = -dx * pre[k].s + dy * pre[k].c;
            if (xr * xr * pre[k].inv_sx2 + yr * yr * pre[k].inv_sy2 <= 1.0)
                v += pre[k].a;
        }
        return v;
    });
}

Image make_bars(const PhantomSpec& spec) {
    const int n = spec.n;
    const double ps = spec.pixel_size;
    const double side = n * ps;
    const double bg = 0.0205;
    const double disk_r = 0.47 * side;
    const size_t ng = spec.bar_freqs.size();
    // Stacked horizontal bands inside the central 60% square; each band
    // keeps a 20% quiet gap so groups stay separated.
    const double region = 0.6 * side;
    const double band_h = region / (double)ng;
    return rasterize_supersampled(n, ps, [&](double x, double y) {
        if (x * x + y * y > disk_r * disk_r) return 0.0;
        double v = bg;
        if (std::abs(x) <= 0.5 * region && std::abs(y) <= 0.5 * region) {
            double t = (0.5 * region - y) / band_h;  // band index, top down
            auto g = (size_t)t;
            if (g < ng && (t - (double)g) >= 0.2) {
                double phase = (x + 0.5 * region) * spec.bar_freqs[g];
                if (phase - std::floor(phase) < 0.5) v += spec.bar_contrast;
            }
        }
        return v;
    });
}

Image make_edge(const PhantomSpec& spec) {
    const double theta = spec.edge_angle_deg * kPi / 180.0;
    const double ct = std::cos(theta), st = std::sin(theta);
    if (spec.edge_sigma_px > 0.0) {
        // Smooth profile: point-sample the error-function edge so the image
        // carries exactly the Gaussian transfer exp(-2 pi^2 sigma^2 f^2),
        // undiluted by pixel-area averaging.
        const double inv_sigma_mm = 1.0 / (spec.edge_sigma_px *
                                           spec.pixel_size);
        Image img(spec.n, spec.pixel_size);
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j) {
                double x = px_x(j, spec.n, spec.pixel_size);
                double y = px_y(i, spec.n, spec.pixel_size);
                double d = (x * ct - y * st) * inv_sigma_mm;
                double cdf = 0.5 * (1.0 + std::erf(d / std::sqrt(2.0)));
                img.at(i, j) = spec.edge_base + spec.edge_contrast * cdf;
            }
        return img;
    }
    return rasterize_supersampled(spec.n, spec.pixel_size,
                                  [&](double x, double y) {
        return x * ct - y * st > 0.0 ? spec.edge_base + spec.edge_contrast
                                     : spec.edge_base;
    });
}

Image make_disk(const PhantomSpec& spec) {
    const double r2 = spec.disk_r * spec.disk_r;
    return rasterize_supersampled(spec.n, spec.pixel_size,
                                  [&](double x, double y) {
        double dx = x - spec.disk_cx, dy = y - spec.disk_cy;
        return dx * dx + dy * dy <= r2 ? spec.disk_mu : 0.0;
    });
}

}  // namespace

Image generate(const PhantomSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case PhantomKind::shepp_logan:
            return make_shepp_logan(spec);
        case PhantomKind::bar_pattern:
            return make_bars(spec);
        case PhantomKind::edge:
            return make_edge(spec);
        case PhantomKind::disk:
            return make_disk(spec);
    }
    throw std::invalid_argument("phantom: unknown kind");
}

}  // namespace sadir
