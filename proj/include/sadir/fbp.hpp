#pragma once

#include "sadir/types.hpp"

namespace sadir {

/// Optional apodization applied after the ramp. Default is none: smoothing
/// windows would bias resolution (MTF) measurements.
enum class FilterWindow { none, hann };

/// Per-view "same" convolution with the discrete spatial-domain ramp
/// (Ram-Lak) kernel: h[0] = 1/(4Δ²), h[k] = −1/(πkΔ)² for odd k, 0 for
/// even k≠0, Δ = det_spacing.
Sinogram ramp_filter(const Sinogram& sino,
                     FilterWindow window = FilterWindow::none);

/// Filtered back-projection onto an n×n grid:
///   fbp(y) = π/n_views · (Δ/pixel_size)² · back_project(ramp_filter(y)).
/// The (Δ/pixel_size)² factor converts the adjoint-backprojector's sample
/// density (∝ pixel_size²/Δ per view) into the unit-density smearing the
/// classical inversion formula assumes; with it, fbp(forward_project(x)) ≈ x.
Image fbp(const Sinogram& sino, const Geometry& geom, int n,
          double pixel_size, FilterWindow window = FilterWindow::none);

/// Exact transpose of fbp as a linear map from sinograms to images; the ramp
/// (and the optional window) are symmetric, so this is
/// scale · ramp_filter(forward_project(g)).
Sinogram fbp_adjoint(const Image& g, const Geometry& geom,
                     FilterWindow window = FilterWindow::none);

}  // namespace sadir
