#pragma once

#include <vector>

#include "sadir/types.hpp"

namespace sadir {

/// Root-mean-square difference over all pixels.
double rmse(const Image& a, const Image& b);

/// Modulation transfer function samples; frequencies in cycles/mm.
struct MtfCurve {
    std::vector<double> frequencies;
    std::vector<double> values;
};

/// Rectangular region: x = column, y = row, both zero-based.
struct Roi {
    int x0 = 0, y0 = 0, width = 0, height = 0;
};

enum class EdgeAxis { vertical, horizontal, auto_detect };

/// Edge-method MTF. The ROI must contain one high-contrast edge spanning it,
/// nominally vertical (or horizontal with `axis`). Rows are projected onto
/// the fitted edge normal and binned into a 4x oversampled edge-spread
/// function when the edge is slanted enough to fill the sub-pixel bins
/// (falling back to whole-pixel bins otherwise), then differentiated,
/// Hann-windowed about the line-spread peak, Fourier-transformed, corrected
/// for the finite-difference and bin-averaging transfer, and normalized to
/// one at zero frequency. Throws if the ROI has no usable edge (contrast
/// under 10x the flat-region noise estimate).
MtfCurve mtf_edge(const Image& img, const Roi& roi,
                  EdgeAxis axis = EdgeAxis::auto_detect);

/// First frequency (cycles/mm) where the curve falls through `fraction`,
/// linearly interpolated; throws (reporting the curve minimum) if it never
/// does. MTF50 = mtf_at(c, 0.5), MTF10 = mtf_at(c, 0.1).
double mtf_at(const MtfCurve& curve, double fraction);

/// 2x Catmull-Rom (a = -0.5) upscale with replicated borders; output pixel
/// centers sit at quarter offsets of the input grid, side doubles and
/// pixel_size halves.
Image bicubic_upscale2(const Image& img);

/// 2x nearest-neighbor upscale (pixel replication).
Image nearest_upscale2(const Image& img);

}  // namespace sadir
