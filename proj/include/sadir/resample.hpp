#pragma once

#include "sadir/types.hpp"

namespace sadir {

/// Detector-axis 2× decimation: output bin d = input bin 2d, det_spacing
/// doubled. Physical binning blur is modeled separately by the learned
/// kernels, so this is pure stride-2 sampling.
Sinogram downsample_det(const Sinogram& sino);

/// Detector-axis 2× bilinear interpolation: even output 2d = input d, odd
/// output 2d+1 = (input d + input d+1)/2 with the last odd bin replicating
/// the final sample; det_spacing halved. downsample_det(upsample_det(y)) == y
/// bit-exactly because originals land on even indices.
Sinogram upsample_det(const Sinogram& sino);

/// Transpose of downsample_det: zero-fills odd detector bins.
Sinogram downsample_adjoint(const Sinogram& sino);

/// Transpose of upsample_det.
Sinogram upsample_adjoint(const Sinogram& sino);

}  // namespace sadir
