#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sadir/metrics.hpp"
#include "sadir/phantoms.hpp"
#include "sadir/train.hpp"
#include "sadir/types.hpp"

namespace sadir {

enum class IoErrorKind {
    bad_magic,
    truncated,
    version_mismatch,
    bad_header,
    io_failure,
};

struct IoError : std::runtime_error {
    IoErrorKind kind;
    IoError(IoErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

/// Raw tensor container: 8-byte magic "CTRAW01\n", little-endian u32 header
/// length, UTF-8 JSON header {dtype, shape, kind, pixel_size|det_spacing,
/// units}, then row-major little-endian f64 payload. Round-trips bit-exactly.
void save_image(const Image& img, const std::string& path);
Image load_image(const std::string& path);
void save_sinogram(const Sinogram& sino, const std::string& path);
Sinogram load_sinogram(const std::string& path);

/// Trained-model snapshot: training configuration, the grid it was trained
/// on, every parameter in the canonical flat order, and the loss history.
struct Checkpoint {
    int version = 1;
    TrainConfig config;
    int train_n = 0;
    double train_pixel_size = 0.0;
    NetParams params;
    std::vector<double> loss_history;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Binary 16-bit PGM (P5, maxval 65535) with linear windowing: lo -> 0,
/// hi -> 65535, clipped, round half up.
void export_pgm16(const Image& img, double lo, double hi,
                  const std::string& path);

/// CSV rows "frequency,value" at 17 significant digits.
void save_mtf_csv(const MtfCurve& curve, const std::string& path);

/// The stable metrics report: {rmse, ssim, mtf50, mtf10, runtime_seconds};
/// absent MTF values are written as null.
void write_metrics_json(const std::string& path, double rmse_value,
                        double ssim_value, std::optional<double> mtf50,
                        std::optional<double> mtf10, double runtime_seconds);

/// JSON configuration loaders for the CLI. Unknown keys are rejected.
Geometry load_geometry_json(const std::string& path);
TrainConfig load_train_config_json(const std::string& path);
PhantomSpec load_phantom_spec_json(const std::string& path);

}  // namespace sadir
