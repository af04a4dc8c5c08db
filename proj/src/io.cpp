#include "sadir/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"

namespace sadir {
namespace {

using nlohmann::json;

constexpr char kRawMagic[] = "CTRAW01\n";
constexpr char kCkptMagic[] = "CTCKPT1\n";

void put_u32le(std::string& out, uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back((char)((v >> (8 * k)) & 0xFF));
}

void put_f64le(std::string& out, double d) {
    uint64_t u;
    std::memcpy(&u, &d, 8);
    for (int k = 0; k < 8; ++k) out.push_back((char)((u >> (8 * k)) & 0xFF));
}

uint32_t get_u32le(const unsigned char* p) {
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= (uint32_t)p[k] << (8 * k);
    return v;
}

double get_f64le(const unsigned char* p) {
    uint64_t u = 0;
    for (int k = 0; k < 8; ++k) u |= (uint64_t)p[k] << (8 * k);
    double d;
    std::memcpy(&d, &u, 8);
    return d;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError(IoErrorKind::io_failure, "cannot open for writing: " + path);
    f.write(bytes.data(), (std::streamsize)bytes.size());
    f.flush();
    if (!f) throw IoError(IoErrorKind::io_failure, "write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(IoErrorKind::io_failure, "cannot open for reading: " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)),
                      std::istreambuf_iterator<char>());
    if (f.bad()) throw IoError(IoErrorKind::io_failure, "read failed: " + path);
    return bytes;
}

// Split a container file into its parsed JSON header and payload pointer.
struct Container {
    json header;
    const unsigned char* payload;
    size_t payload_len;
};

Container open_container(const std::string& bytes, const char* magic,
                         const std::string& path) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), magic, 8) != 0)
        throw IoError(IoErrorKind::bad_magic, "bad magic in " + path);
    const auto* p = (const unsigned char*)bytes.data();
    uint32_t hlen = get_u32le(p + 8);
    if (bytes.size() < 12 + (size_t)hlen)
        throw IoError(IoErrorKind::truncated, "truncated header in " + path);
    Container c;
    try {
        c.header = json::parse(bytes.begin() + 12, bytes.begin() + 12 + hlen);
    } catch (const json::exception& e) {
        throw IoError(IoErrorKind::bad_header,
                      "unparseable header in " + path + ": " + e.what());
    }
    c.payload = p + 12 + hlen;
    c.payload_len = bytes.size() - 12 - hlen;
    return c;
}

std::string pack_container(const char* magic, const json& header,
                           const std::vector<const std::vector<double>*>& parts) {
    std::string out(magic, 8);
    std::string h = header.dump();
    put_u32le(out, (uint32_t)h.size());
    out += h;
    size_t total = 0;
    for (const auto* v : parts) total += v->size();
    out.reserve(out.size() + 8 * total);
    for (const auto* v : parts)
        for (double d : *v) put_f64le(out, d);
    return out;
}

void read_doubles(const unsigned char* p, size_t count, std::vector<double>& out) {
    out.resize(count);
    for (size_t i = 0; i < count; ++i) out[i] = get_f64le(p + 8 * i);
}

template <class T>
T header_get(const json& h, const char* key, const std::string& path) {
    auto it = h.find(key);
    if (it == h.end())
        throw IoError(IoErrorKind::bad_header,
                      std::string("missing header field '") + key + "' in " + path);
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw IoError(IoErrorKind::bad_header,
                      std::string("bad header field '") + key + "' in " + path);
    }
}

void check_payload(const Container& c, size_t n_doubles, const std::string& path) {
    if (c.payload_len < 8 * n_doubles)
        throw IoError(IoErrorKind::truncated, "truncated payload in " + path);
    if (c.payload_len > 8 * n_doubles)
        throw IoError(IoErrorKind::bad_header,
                      "payload larger than header declares in " + path);
}

}  // namespace

void save_image(const Image& img, const std::string& path) {
    img.validate();
    json h = {{"dtype", "f64"},
              {"shape", {img.n, img.n}},
              {"kind", "image"},
              {"pixel_size", img.pixel_size},
              {"units", "mm^-1"}};
    write_file(path, pack_container(kRawMagic, h, {&img.data}));
}

Image load_image(const std::string& path) {
    std::string bytes = read_file(path);
    Container c = open_container(bytes, kRawMagic, path);
    if (header_get<std::string>(c.header, "dtype", path) != "f64")
        throw IoError(IoErrorKind::bad_header, "unsupported dtype in " + path);
    if (header_get<std::string>(c.header, "kind", path) != "image")
        throw IoError(IoErrorKind::bad_header, path + " is not an image tensor");
    auto shape = header_get<std::vector<int>>(c.header, "shape", path);
    if (shape.size() != 2 || shape[0] != shape[1] || shape[0] < 1)
        throw IoError(IoErrorKind::bad_header, "image shape must be square in " + path);
    Image img(shape[0], header_get<double>(c.header, "pixel_size", path));
    check_payload(c, img.data.size(), path);
    read_doubles(c.payload, img.data.size(), img.data);
    return img;
}

void save_sinogram(const Sinogram& sino, const std::string& path) {
    sino.validate();
    json h = {{"dtype", "f64"},
              {"shape", {sino.n_views, sino.n_det}},
              {"kind", "sinogram"},
              {"det_spacing", sino.det_spacing},
              {"units", "1"}};
    write_file(path, pack_container(kRawMagic, h, {&sino.data}));
}

Sinogram load_sinogram(const std::string& path) {
    std::string bytes = read_file(path);
    Container c = open_container(bytes, kRawMagic, path);
    if (header_get<std::string>(c.header, "dtype", path) != "f64")
        throw IoError(IoErrorKind::bad_header, "unsupported dtype in " + path);
    if (header_get<std::string>(c.header, "kind", path) != "sinogram")
        throw IoError(IoErrorKind::bad_header, path + " is not a sinogram tensor");
    auto shape = header_get<std::vector<int>>(c.header, "shape", path);
    if (shape.size() != 2 || shape[0] < 1 || shape[1] < 1)
        throw IoError(IoErrorKind::bad_header, "bad sinogram shape in " + path);
    Sinogram sino(shape[0], shape[1],
                  header_get<double>(c.header, "det_spacing", path));
    check_payload(c, sino.data.size(), path);
    read_doubles(c.payload, sino.data.size(), sino.data);
    return sino;
}

namespace {

json config_to_json(const TrainConfig& c) {
    return {{"learning_rate", c.learning_rate},
            {"epochs", c.epochs},
            {"seed", c.seed},
            {"n_blocks", c.n_blocks},
            {"shared_blocks", c.shared_blocks},
            {"ssim_window", c.ssim_window},
            {"eps1", c.eps1},
            {"eps2", c.eps2},
            {"L_range", c.L_range},
            {"l2_mean", c.l2_mean},
            {"adam_beta1", c.adam_beta1},
            {"adam_beta2", c.adam_beta2},
            {"adam_eps", c.adam_eps},
            {"init_std", c.init_std},
            {"noise_std", c.noise_std}};
}

TrainConfig config_from_json(const json& j, const std::string& path) {
    TrainConfig c;
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        const json& v = item.value();
        try {
            if (k == "learning_rate") c.learning_rate = v.get<double>();
            else if (k == "epochs") c.epochs = v.get<int>();
            else if (k == "seed") c.seed = v.get<uint64_t>();
            else if (k == "n_blocks") c.n_blocks = v.get<int>();
            else if (k == "shared_blocks") c.shared_blocks = v.get<bool>();
            else if (k == "ssim_window") c.ssim_window = v.get<int>();
            else if (k == "eps1") c.eps1 = v.get<double>();
            else if (k == "eps2") c.eps2 = v.get<double>();
            else if (k == "L_range") c.L_range = v.get<double>();
            else if (k == "l2_mean") c.l2_mean = v.get<bool>();
            else if (k == "adam_beta1") c.adam_beta1 = v.get<double>();
            else if (k == "adam_beta2") c.adam_beta2 = v.get<double>();
            else if (k == "adam_eps") c.adam_eps = v.get<double>();
            else if (k == "init_std") c.init_std = v.get<double>();
            else if (k == "noise_std") c.noise_std = v.get<double>();
            else
                throw IoError(IoErrorKind::bad_header,
                              "unknown training-config key '" + k + "' in " + path);
        } catch (const json::exception&) {
            throw IoError(IoErrorKind::bad_header,
                          "bad training-config value for '" + k + "' in " + path);
        }
    }
    return c;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    ckpt.params.validate();
    std::vector<double> flat = flatten_params(ckpt.params);
    json h = {{"version", ckpt.version},
              {"config", config_to_json(ckpt.config)},
              {"train_n", ckpt.train_n},
              {"train_pixel_size", ckpt.train_pixel_size},
              {"shared", ckpt.params.shared},
              {"shared_iterations", ckpt.params.shared_iterations},
              {"n_blocks", ckpt.params.blocks.size()},
              {"param_count", flat.size()},
              {"loss_count", ckpt.loss_history.size()}};
    write_file(path, pack_container(kCkptMagic, h, {&flat, &ckpt.loss_history}));
}

Checkpoint load_checkpoint(const std::string& path) {
    std::string bytes = read_file(path);
    Container c = open_container(bytes, kCkptMagic, path);
    Checkpoint ckpt;
    ckpt.version = header_get<int>(c.header, "version", path);
    if (ckpt.version != 1)
        throw IoError(IoErrorKind::version_mismatch,
                      "unsupported checkpoint version " +
                          std::to_string(ckpt.version) + " in " + path);
    auto cfg_it = c.header.find("config");
    if (cfg_it == c.header.end() || !cfg_it->is_object())
        throw IoError(IoErrorKind::bad_header, "missing config in " + path);
    ckpt.config = config_from_json(*cfg_it, path);
    ckpt.train_n = header_get<int>(c.header, "train_n", path);
    ckpt.train_pixel_size = header_get<double>(c.header, "train_pixel_size", path);
    ckpt.params.shared = header_get<bool>(c.header, "shared", path);
    ckpt.params.shared_iterations =
        header_get<int>(c.header, "shared_iterations", path);
    size_t n_blocks = header_get<size_t>(c.header, "n_blocks", path);
    size_t pcount = header_get<size_t>(c.header, "param_count", path);
    size_t lcount = header_get<size_t>(c.header, "loss_count", path);
    if (n_blocks < 1 || pcount != n_blocks * (size_t)kScalarsPerBlock)
        throw IoError(IoErrorKind::bad_header, "inconsistent parameter count in " + path);
    ckpt.params.blocks.assign(n_blocks, BlockParams{});
    check_payload(c, pcount + lcount, path);
    std::vector<double> flat;
    read_doubles(c.payload, pcount, flat);
    unflatten_params(flat, ckpt.params);
    read_doubles(c.payload + 8 * pcount, lcount, ckpt.loss_history);
    return ckpt;
}

void export_pgm16(const Image& img, double lo, double hi,
                  const std::string& path) {
    detail::require(lo < hi, "export_pgm16: window must satisfy lo < hi");
    img.validate();
    std::string out = "P5\n" + std::to_string(img.n) + " " +
                      std::to_string(img.n) + "\n65535\n";
    out.reserve(out.size() + 2 * img.data.size());
    const double scale = 65535.0 / (hi - lo);
    for (double v : img.data) {
        double t = std::floor((v - lo) * scale + 0.5);  // round half up
        if (t < 0.0) t = 0.0;
        if (t > 65535.0) t = 65535.0;
        auto q = (uint16_t)t;
        out.push_back((char)(q >> 8));  // PGM 16-bit samples are big-endian
        out.push_back((char)(q & 0xFF));
    }
    write_file(path, out);
}

void save_mtf_csv(const MtfCurve& curve, const std::string& path) {
    detail::require(curve.frequencies.size() == curve.values.size(),
                    "save_mtf_csv: malformed curve");
    std::string out;
    char line[80];
    for (size_t i = 0; i < curve.frequencies.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", curve.frequencies[i],
                      curve.values[i]);
        out += line;
    }
    write_file(path, out);
}

void write_metrics_json(const std::string& path, double rmse_value,
                        double ssim_value, std::optional<double> mtf50,
                        std::optional<double> mtf10, double runtime_seconds) {
    json j;
    j["rmse"] = rmse_value;
    j["ssim"] = ssim_value;
    j["mtf50"] = mtf50 ? json(*mtf50) : json(nullptr);
    j["mtf10"] = mtf10 ? json(*mtf10) : json(nullptr);
    j["runtime_seconds"] = runtime_seconds;
    write_file(path, j.dump(2) + "\n");
}

namespace {

json parse_json_file(const std::string& path) {
    std::string bytes = read_file(path);
    try {
        return json::parse(bytes);
    } catch (const json::exception& e) {
        throw IoError(IoErrorKind::bad_header,
                      "unparseable JSON in " + path + ": " + e.what());
    }
}

}  // namespace

Geometry load_geometry_json(const std::string& path) {
    json j = parse_json_file(path);
    int n_views = 0, n_det = 0;
    double det_spacing = 0.0, span = kPi, offset = 0.0;
    bool have_views = false, have_det = false, have_spacing = false;
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        try {
            if (k == "n_views") { n_views = item.value().get<int>(); have_views = true; }
            else if (k == "n_det") { n_det = item.value().get<int>(); have_det = true; }
            else if (k == "det_spacing") { det_spacing = item.value().get<double>(); have_spacing = true; }
            else if (k == "span") span = item.value().get<double>();
            else if (k == "det_center_offset") offset = item.value().get<double>();
            else
                throw IoError(IoErrorKind::bad_header,
                              "unknown geometry key '" + k + "' in " + path);
        } catch (const json::exception&) {
            throw IoError(IoErrorKind::bad_header,
                          "bad geometry value for '" + k + "' in " + path);
        }
    }
    if (!have_views || !have_det || !have_spacing)
        throw IoError(IoErrorKind::bad_header,
                      "geometry needs n_views, n_det, det_spacing in " + path);
    try {
        Geometry g = Geometry::uniform(n_views, n_det, det_spacing, span);
        g.det_center_offset = offset;
        g.validate();
        return g;
    } catch (const std::invalid_argument& e) {
        throw IoError(IoErrorKind::bad_header,
                      std::string("invalid geometry in ") + path + ": " + e.what());
    }
}

TrainConfig load_train_config_json(const std::string& path) {
    json j = parse_json_file(path);
    if (!j.is_object())
        throw IoError(IoErrorKind::bad_header,
                      "training config must be a JSON object in " + path);
    TrainConfig c = config_from_json(j, path);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw IoError(IoErrorKind::bad_header,
                      std::string("invalid training config in ") + path + ": " + e.what());
    }
    return c;
}

PhantomSpec load_phantom_spec_json(const std::string& path) {
    json j = parse_json_file(path);
    if (!j.is_object())
        throw IoError(IoErrorKind::bad_header,
                      "phantom spec must be a JSON object in " + path);
    PhantomSpec s;
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        const json& v = item.value();
        try {
            if (k == "kind") {
                auto name = v.get<std::string>();
                if (name == "shepp_logan") s.kind = PhantomKind::shepp_logan;
                else if (name == "bar_pattern") s.kind = PhantomKind::bar_pattern;
                else if (name == "edge") s.kind = PhantomKind::edge;
                else if (name == "disk") s.kind = PhantomKind::disk;
                else
                    throw IoError(IoErrorKind::bad_header,
                                  "unknown phantom kind '" + name + "' in " + path);
            }
            else if (k == "n") s.n = v.get<int>();
            else if (k == "pixel_size") s.pixel_size = v.get<double>();
            else if (k == "bar_freqs") s.bar_freqs = v.get<std::vector<double>>();
            else if (k == "bar_contrast") s.bar_contrast = v.get<double>();
            else if (k == "edge_angle_deg") s.edge_angle_deg = v.get<double>();
            else if (k == "edge_base") s.edge_base = v.get<double>();
            else if (k == "edge_contrast") s.edge_contrast = v.get<double>();
            else if (k == "edge_sigma_px") s.edge_sigma_px = v.get<double>();
            else if (k == "disk_cx") s.disk_cx = v.get<double>();
            else if (k == "disk_cy") s.disk_cy = v.get<double>();
            else if (k == "disk_r") s.disk_r = v.get<double>();
            else if (k == "disk_mu") s.disk_mu = v.get<double>();
            else
                throw IoError(IoErrorKind::bad_header,
                              "unknown phantom key '" + k + "' in " + path);
        } catch (const json::exception&) {
            throw IoError(IoErrorKind::bad_header,
                          "bad phantom value for '" + k + "' in " + path);
        }
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw IoError(IoErrorKind::bad_header,
                      std::string("invalid phantom spec in ") + path + ": " + e.what());
    }
    return s;
}

}  // namespace sadir
