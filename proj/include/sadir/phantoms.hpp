#pragma once

#include <vector>

#include "sadir/types.hpp"

namespace sadir {

enum class PhantomKind { shepp_logan, bar_pattern, edge, disk };

/// Parameters for the synthetic test objects. Attenuation values are in
/// mm⁻¹ and must stay inside [0, 0.1]; water-equivalent tissue is 0.0205.
struct PhantomSpec {
    PhantomKind kind = PhantomKind::shepp_logan;
    int n = 256;
    double pixel_size = 1.0;  // mm

    // bar_pattern: one horizontal band of vertical bars per frequency
    // (lp/mm, 50% duty) inside a water disk.
    std::vector<double> bar_freqs;
    double bar_contrast = 0.0205;

    // edge: straight boundary through the image center, tilted from the
    // vertical axis. sigma 0 gives an anti-aliased hard step; sigma > 0
    // gives a Gaussian edge profile (in pixels, point-sampled) whose MTF is
    // exp(-2 pi^2 sigma^2 f^2).
    double edge_angle_deg = 0.0;
    double edge_base = 0.01;
    double edge_contrast = 0.0205;
    double edge_sigma_px = 0.0;

    // disk: filled circle, center offset from the image center in mm.
    double disk_cx = 0.0, disk_cy = 0.0;
    double disk_r = 0.0;
    double disk_mu = 0.0205;

    void validate() const;
};

/// Deterministic rasterization of `spec`; discontinuous objects are 4x4
/// supersampled so boundaries are area-weighted.
Image generate(const PhantomSpec& spec);

}  // namespace sadir
