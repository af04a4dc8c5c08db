#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sadir {

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a computation produces non-finite values (diverged training,
/// overflowing parameters); distinct from input-validation failures.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}
}  // namespace detail

/// Parallel-beam acquisition description. Detector bin d sits at signed
/// coordinate (d - (n_det-1)/2 + det_center_offset) * det_spacing, with the
/// ray through that coordinate perpendicular to the detector axis.
struct Geometry {
    std::vector<double> angles;      // view angles, radians
    int n_det = 0;                   // detector bins per view
    double det_spacing = 0.0;        // mm per bin
    double det_center_offset = 0.0;  // bins, default 0

    int n_views() const { return static_cast<int>(angles.size()); }

    double det_coord(int d) const {
        return (d - 0.5 * (n_det - 1) + det_center_offset) * det_spacing;
    }

    /// Uniform view sampling of [0, span) without duplicate angles.
    static Geometry uniform(int n_views, int n_det, double det_spacing,
                            double span = kPi) {
        Geometry g;
        g.n_det = n_det;
        g.det_spacing = det_spacing;
        g.angles.resize(static_cast<size_t>(n_views));
        for (int v = 0; v < n_views; ++v) g.angles[v] = span * v / n_views;
        g.validate();
        return g;
    }

    /// Same views, half the detector bins at twice the spacing.
    Geometry lr_counterpart() const {
        detail::require(n_det % 2 == 0, "lr_counterpart: n_det must be even");
        Geometry g = *this;
        g.n_det = n_det / 2;
        g.det_spacing = det_spacing * 2.0;
        return g;
    }

    /// Same views, twice the detector bins at half the spacing.
    Geometry hr_counterpart() const {
        Geometry g = *this;
        g.n_det = n_det * 2;
        g.det_spacing = det_spacing * 0.5;
        return g;
    }

    void validate() const {
        detail::require(n_views() >= 1, "geometry: n_views >= 1");
        detail::require(n_det >= 2, "geometry: n_det >= 2");
        detail::require(det_spacing > 0.0, "geometry: det_spacing > 0");
        for (double a : angles)
            detail::require(std::isfinite(a), "geometry: non-finite angle");
    }
};

/// Square pixel grid of linear attenuation coefficients (mm^-1), row-major.
/// Pixel (i,j) centers at x = (j-(n-1)/2)*pixel_size, y = ((n-1)/2-i)*pixel_size.
struct Image {
    int n = 0;
    double pixel_size = 0.0;  // mm
    std::vector<double> data;

    Image() = default;
    Image(int n_, double pixel_size_, double fill = 0.0)
        : n(n_), pixel_size(pixel_size_),
          data(static_cast<size_t>(n_) * n_, fill) {}

    double& at(int i, int j) { return data[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * n + j]; }
    size_t size() const { return data.size(); }

    void validate() const {
        detail::require(n >= 1, "image: n >= 1");
        detail::require(pixel_size > 0.0, "image: pixel_size > 0");
        detail::require(data.size() == static_cast<size_t>(n) * n,
                        "image: data size mismatch");
        for (double v : data)
            detail::require(std::isfinite(v), "image: non-finite value");
    }
};

/// views x detector-bins array of line integrals (dimensionless).
struct Sinogram {
    int n_views = 0;
    int n_det = 0;
    double det_spacing = 0.0;
    std::vector<double> data;  // row-major, view-major

    Sinogram() = default;
    Sinogram(int n_views_, int n_det_, double det_spacing_, double fill = 0.0)
        : n_views(n_views_), n_det(n_det_), det_spacing(det_spacing_),
          data(static_cast<size_t>(n_views_) * n_det_, fill) {}

    double& at(int v, int d) { return data[static_cast<size_t>(v) * n_det + d]; }
    double at(int v, int d) const { return data[static_cast<size_t>(v) * n_det + d]; }
    double* row(int v) { return data.data() + static_cast<size_t>(v) * n_det; }
    const double* row(int v) const { return data.data() + static_cast<size_t>(v) * n_det; }
    size_t size() const { return data.size(); }

    bool shape_matches(const Geometry& g) const {
        return n_views == g.n_views() && n_det == g.n_det &&
               det_spacing == g.det_spacing;
    }

    void validate() const {
        detail::require(n_views >= 1 && n_det >= 1, "sinogram: empty shape");
        detail::require(det_spacing > 0.0, "sinogram: det_spacing > 0");
        detail::require(data.size() == static_cast<size_t>(n_views) * n_det,
                        "sinogram: data size mismatch");
        for (double v : data)
            detail::require(std::isfinite(v), "sinogram: non-finite value");
    }
};

// Elementwise helpers shared across modules.
inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace sadir
