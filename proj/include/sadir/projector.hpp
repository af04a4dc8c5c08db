#pragma once

#include "sadir/types.hpp"

namespace sadir {

/// Ray-driven line-integral projector: entry (v,d) is the integral of img
/// along the ray at angles[v] through detector coordinate det_coord(d),
/// sampled with linear interpolation at step min(pixel_size, det_spacing)/2.
Sinogram forward_project(const Image& img, const Geometry& geom);

/// Exact transpose of forward_project's discretization (same sample
/// positions and interpolation weights, scattered instead of gathered).
Image back_project(const Sinogram& sino, const Geometry& geom, int n,
                   double pixel_size);

}  // namespace sadir
