// Python module exposing the core pipeline: geometry, projection, FBP,
// phantoms, zero-shot training, reconstruction, metrics, and file I/O.
// Images cross the boundary as (n, n) float64 arrays plus a pixel size;
// sinograms as (n_views, n_det) float64 arrays plus a detector spacing.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sadir/fbp.hpp"
#include "sadir/io.hpp"
#include "sadir/loss.hpp"
#include "sadir/metrics.hpp"
#include "sadir/net.hpp"
#include "sadir/phantoms.hpp"
#include "sadir/projector.hpp"
#include "sadir/resample.hpp"
#include "sadir/train.hpp"
#include "sadir/types.hpp"

namespace py = pybind11;
using namespace sadir;

namespace {

Image image_from(const py::array_t<double, py::array::c_style |
                                               py::array::forcecast>& a,
                 double pixel_size) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw std::invalid_argument("image array must be square and 2-D");
    Image img((int)a.shape(0), pixel_size);
    std::copy(a.data(), a.data() + img.size(), img.data.begin());
    return img;
}

Sinogram sino_from(const py::array_t<double, py::array::c_style |
                                                 py::array::forcecast>& a,
                   double det_spacing) {
    if (a.ndim() != 2)
        throw std::invalid_argument("sinogram array must be 2-D");
    Sinogram s((int)a.shape(0), (int)a.shape(1), det_spacing);
    std::copy(a.data(), a.data() + s.size(), s.data.begin());
    return s;
}

py::array_t<double> to_array(const Image& img) {
    py::array_t<double> a({img.n, img.n});
    std::copy(img.data.begin(), img.data.end(), a.mutable_data());
    return a;
}

py::array_t<double> to_array(const Sinogram& s) {
    py::array_t<double> a({s.n_views, s.n_det});
    std::copy(s.data.begin(), s.data.end(), a.mutable_data());
    return a;
}

PhantomKind kind_from(const std::string& name) {
    if (name == "shepp_logan") return PhantomKind::shepp_logan;
    if (name == "bar_pattern") return PhantomKind::bar_pattern;
    if (name == "edge") return PhantomKind::edge;
    if (name == "disk") return PhantomKind::disk;
    throw std::invalid_argument("unknown phantom kind: " + name);
}

}  // namespace

PYBIND11_MODULE(_sadir, m) {
    m.doc() = "Zero-shot CT super-resolution: tomography operators, "
              "unrolled network training, and image-quality metrics";

    py::register_exception<NumericError>(m, "NumericError",
                                         PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    py::class_<Geometry>(m, "Geometry")
        .def_static("uniform", &Geometry::uniform, py::arg("n_views"),
                    py::arg("n_det"), py::arg("det_spacing"),
                    py::arg("span") = kPi,
                    "Uniform view sampling of [0, span)")
        .def_readwrite("angles", &Geometry::angles)
        .def_readwrite("n_det", &Geometry::n_det)
        .def_readwrite("det_spacing", &Geometry::det_spacing)
        .def_readwrite("det_center_offset", &Geometry::det_center_offset)
        .def_property_readonly("n_views", &Geometry::n_views)
        .def("lr_counterpart", &Geometry::lr_counterpart)
        .def("hr_counterpart", &Geometry::hr_counterpart)
        .def("__repr__", [](const Geometry& g) {
            return "Geometry(n_views=" + std::to_string(g.n_views()) +
                   ", n_det=" + std::to_string(g.n_det) +
                   ", det_spacing=" + std::to_string(g.det_spacing) + ")";
        });

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("n_blocks", &TrainConfig::n_blocks)
        .def_readwrite("shared_blocks", &TrainConfig::shared_blocks)
        .def_readwrite("ssim_window", &TrainConfig::ssim_window)
        .def_readwrite("eps1", &TrainConfig::eps1)
        .def_readwrite("eps2", &TrainConfig::eps2)
        .def_readwrite("L_range", &TrainConfig::L_range)
        .def_readwrite("l2_mean", &TrainConfig::l2_mean)
        .def_readwrite("adam_beta1", &TrainConfig::adam_beta1)
        .def_readwrite("adam_beta2", &TrainConfig::adam_beta2)
        .def_readwrite("adam_eps", &TrainConfig::adam_eps)
        .def_readwrite("init_std", &TrainConfig::init_std)
        .def_readwrite("noise_std", &TrainConfig::noise_std);

    py::class_<NetParams>(m, "NetParams")
        .def_property_readonly("n_blocks",
                               [](const NetParams& p) {
                                   return p.blocks.size();
                               })
        .def_readwrite("shared", &NetParams::shared)
        .def_readwrite("shared_iterations", &NetParams::shared_iterations)
        .def("flatten",
             [](const NetParams& p) { return flatten_params(p); },
             "All learnable scalars in the canonical checkpoint order")
        .def("names", [](const NetParams& p) { return param_names(p); });

    // --- phantoms ---------------------------------------------------------
    m.def(
        "phantom",
        [](const std::string& kind, int n, double pixel_size,
           std::vector<double> bar_freqs, double bar_contrast,
           double edge_angle_deg, double edge_base, double edge_contrast,
           double edge_sigma_px, double disk_cx, double disk_cy,
           double disk_r, double disk_mu) {
            PhantomSpec spec;
            spec.kind = kind_from(kind);
            spec.n = n;
            spec.pixel_size = pixel_size;
            if (!bar_freqs.empty()) spec.bar_freqs = std::move(bar_freqs);
            spec.bar_contrast = bar_contrast;
            spec.edge_angle_deg = edge_angle_deg;
            spec.edge_base = edge_base;
            spec.edge_contrast = edge_contrast;
            spec.edge_sigma_px = edge_sigma_px;
            spec.disk_cx = disk_cx;
            spec.disk_cy = disk_cy;
            spec.disk_r = disk_r;
            spec.disk_mu = disk_mu;
            return to_array(generate(spec));
        },
        py::arg("kind"), py::arg("n") = 256, py::arg("pixel_size") = 1.0,
        py::arg("bar_freqs") = std::vector<double>{0.05, 0.10, 0.20, 0.30},
        py::arg("bar_contrast") = 0.0205, py::arg("edge_angle_deg") = 0.0,
        py::arg("edge_base") = 0.01, py::arg("edge_contrast") = 0.0205,
        py::arg("edge_sigma_px") = 0.0, py::arg("disk_cx") = 0.0,
        py::arg("disk_cy") = 0.0, py::arg("disk_r") = 0.0,
        py::arg("disk_mu") = 0.0205,
        "Rasterize a synthetic test object (kinds: shepp_logan, "
        "bar_pattern, edge, disk)");

    // --- tomography operators ----------------------------------------------
    m.def(
        "forward_project",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& img,
           double pixel_size, const Geometry& geom) {
            return to_array(forward_project(image_from(img, pixel_size),
                                            geom));
        },
        py::arg("image"), py::arg("pixel_size"), py::arg("geometry"),
        "Ray-driven line integrals of a square image");

    m.def(
        "back_project",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& sino,
           const Geometry& geom, int n, double pixel_size) {
            return to_array(back_project(sino_from(sino, geom.det_spacing),
                                         geom, n, pixel_size));
        },
        py::arg("sinogram"), py::arg("geometry"), py::arg("n"),
        py::arg("pixel_size"), "Exact adjoint of forward_project");

    m.def(
        "fbp",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& sino,
           const Geometry& geom, int n, double pixel_size) {
            return to_array(fbp(sino_from(sino, geom.det_spacing), geom, n,
                                pixel_size));
        },
        py::arg("sinogram"), py::arg("geometry"), py::arg("n"),
        py::arg("pixel_size"),
        "Filtered back-projection (spatial-domain ramp, smoothing window)");

    m.def(
        "downsample_det",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& sino,
           double det_spacing) {
            return to_array(downsample_det(sino_from(sino, det_spacing)));
        },
        py::arg("sinogram"), py::arg("det_spacing") = 1.0,
        "Average adjacent detector-bin pairs (half the bins)");

    m.def(
        "upsample_det",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& sino,
           double det_spacing) {
            return to_array(upsample_det(sino_from(sino, det_spacing)));
        },
        py::arg("sinogram"), py::arg("det_spacing") = 1.0,
        "Linear detector-axis interpolation (double the bins)");

    // --- zero-shot training and reconstruction -----------------------------
    m.def(
        "train",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& sino,
           const Geometry& geom, int n, double pixel_size,
           const TrainConfig& cfg) {
            TrainResult r = train(sino_from(sino, geom.det_spacing), geom, n,
                                  pixel_size, cfg, nullptr);
            return py::make_tuple(r.params, r.loss_history);
        },
        py::arg("sinogram"), py::arg("geometry"), py::arg("n"),
        py::arg("pixel_size"), py::arg("config") = TrainConfig{},
        "Zero-shot training on one measured sinogram; returns "
        "(params, loss_history)");

    m.def(
        "reconstruct",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& sino,
           const NetParams& params, const Geometry& geom, int out_n,
           double out_pixel_size) {
            return to_array(reconstruct(sino_from(sino, geom.det_spacing),
                                        params, geom, out_n,
                                        out_pixel_size));
        },
        py::arg("sinogram"), py::arg("params"), py::arg("geometry"),
        py::arg("out_n"), py::arg("out_pixel_size"),
        "Apply trained parameters one scale above the measurement");

    // --- metrics ------------------------------------------------------------
    m.def(
        "rmse",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& b) {
            return rmse(image_from(a, 1.0), image_from(b, 1.0));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "ssim",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& b,
           int window, double L_range) {
            LossConfig cfg;
            cfg.ssim_window = window;
            cfg.L_range = L_range;
            return ssim(image_from(a, 1.0), image_from(b, 1.0), cfg);
        },
        py::arg("a"), py::arg("b"), py::arg("window") = 11,
        py::arg("L_range") = 0.082);

    m.def(
        "mtf_edge",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& img,
           double pixel_size, int x0, int y0, int width, int height) {
            MtfCurve c = mtf_edge(image_from(img, pixel_size),
                                  Roi{x0, y0, width, height});
            return py::make_tuple(c.frequencies, c.values);
        },
        py::arg("image"), py::arg("pixel_size"), py::arg("x0"),
        py::arg("y0"), py::arg("width"), py::arg("height"),
        "Edge-method MTF inside the ROI; returns (frequencies, values) "
        "with frequencies in cycles/mm");

    m.def(
        "mtf_at",
        [](const std::vector<double>& freqs,
           const std::vector<double>& values, double fraction) {
            return mtf_at(MtfCurve{freqs, values}, fraction);
        },
        py::arg("frequencies"), py::arg("values"), py::arg("fraction"),
        "First frequency where the curve falls through `fraction`");

    m.def(
        "bicubic_upscale2",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& img) {
            return to_array(bicubic_upscale2(image_from(img, 1.0)));
        },
        py::arg("image"), "2x Catmull-Rom upscale");

    m.def(
        "nearest_upscale2",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& img) {
            return to_array(nearest_upscale2(image_from(img, 1.0)));
        },
        py::arg("image"), "2x pixel replication");

    // --- file I/O -----------------------------------------------------------
    m.def(
        "load_image",
        [](const std::string& path) {
            Image img = load_image(path);
            return py::make_tuple(to_array(img), img.pixel_size);
        },
        py::arg("path"), "Returns (array, pixel_size)");
    m.def(
        "save_image",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& img,
           double pixel_size, const std::string& path) {
            save_image(image_from(img, pixel_size), path);
        },
        py::arg("image"), py::arg("pixel_size"), py::arg("path"));
    m.def(
        "load_sinogram",
        [](const std::string& path) {
            Sinogram s = load_sinogram(path);
            return py::make_tuple(to_array(s), s.det_spacing);
        },
        py::arg("path"), "Returns (array, det_spacing)");
    m.def(
        "save_sinogram",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& sino,
           double det_spacing, const std::string& path) {
            save_sinogram(sino_from(sino, det_spacing), path);
        },
        py::arg("sinogram"), py::arg("det_spacing"), py::arg("path"));
    m.def(
        "load_checkpoint",
        [](const std::string& path) {
            Checkpoint c = load_checkpoint(path);
            return py::make_tuple(c.params, c.loss_history, c.train_n,
                                  c.train_pixel_size);
        },
        py::arg("path"),
        "Returns (params, loss_history, train_n, train_pixel_size)");
    m.def(
        "export_pgm16",
        [](const py::array_t<double, py::array::c_style |
                                         py::array::forcecast>& img,
           double lo, double hi, const std::string& path) {
            export_pgm16(image_from(img, 1.0), lo, hi, path);
        },
        py::arg("image"), py::arg("lo"), py::arg("hi"), py::arg("path"),
        "16-bit PGM with a linear display window");
}
