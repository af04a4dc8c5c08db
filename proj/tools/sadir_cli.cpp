#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sadir/fbp.hpp"
#include "sadir/io.hpp"
#include "sadir/loss.hpp"
#include "sadir/metrics.hpp"
#include "sadir/net.hpp"
#include "sadir/phantoms.hpp"
#include "sadir/projector.hpp"
#include "sadir/train.hpp"

namespace {

using namespace sadir;

// Bad inline argument values (exit code 1), as opposed to bad input files.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<int, double> parse_grid(const std::string& s) {
    std::istringstream iss(s);
    int n = 0;
    char comma = 0;
    double ps = 0.0;
    iss >> n >> comma >> ps;
    if (!iss || comma != ',' || !iss.eof() || n < 1 || !(ps > 0.0))
        throw UsageError("--grid expects n,pixel_size with n >= 1 and "
                         "pixel_size > 0, got '" + s + "'");
    return {n, ps};
}

Roi parse_roi(const std::string& s) {
    std::istringstream iss(s);
    Roi roi;
    char c1 = 0, c2 = 0, c3 = 0;
    iss >> roi.x0 >> c1 >> roi.y0 >> c2 >> roi.width >> c3 >> roi.height;
    if (!iss || c1 != ',' || c2 != ',' || c3 != ',' || !iss.eof() ||
        roi.width < 1 || roi.height < 1)
        throw UsageError("--roi expects x0,y0,width,height, got '" + s + "'");
    return roi;
}

// The uniform half-turn acquisition implied by a sinogram's own header.
Geometry geometry_of(const Sinogram& sino) {
    return Geometry::uniform(sino.n_views, sino.n_det, sino.det_spacing, kPi);
}

struct Args {
    std::string spec, img, geom, sino, grid, config, ckpt, out, test, ref,
        report, roi;
    uint64_t seed = 0;
    bool seed_set = false;
    int epochs = -1;
    double runtime = 0.0;
};

TrainConfig resolve_config(const Args& a) {
    TrainConfig cfg;
    if (!a.config.empty()) cfg = load_train_config_json(a.config);
    if (a.seed_set) cfg.seed = a.seed;
    if (a.epochs >= 0) cfg.epochs = a.epochs;
    return cfg;
}

void run_phantom(const Args& a) {
    save_image(generate(load_phantom_spec_json(a.spec)), a.out);
}

void run_project(const Args& a) {
    Image img = load_image(a.img);
    Geometry geom = load_geometry_json(a.geom);
    save_sinogram(forward_project(img, geom), a.out);
}

void run_fbp(const Args& a) {
    Sinogram sino = load_sinogram(a.sino);
    auto [n, ps] = parse_grid(a.grid);
    save_image(fbp(sino, geometry_of(sino), n, ps), a.out);
}

void run_simulate_lr(const Args& a) {
    Sinogram sino = load_sinogram(a.sino);
    auto [n, ps] = parse_grid(a.grid);
    ZslPair pair = build_zsl_pair(sino, geometry_of(sino), n, ps,
                                  resolve_config(a));
    save_sinogram(pair.y_l, a.out);
}

void run_train(const Args& a) {
    Sinogram sino = load_sinogram(a.sino);
    auto [n, ps] = parse_grid(a.grid);
    TrainConfig cfg = resolve_config(a);
    TrainResult result = train(sino, geometry_of(sino), n, ps, cfg, &std::cerr);
    Checkpoint ckpt;
    ckpt.config = cfg;
    ckpt.train_n = n;
    ckpt.train_pixel_size = ps;
    ckpt.params = std::move(result.params);
    ckpt.loss_history = std::move(result.loss_history);
    save_checkpoint(ckpt, a.out);
}

void run_reconstruct(const Args& a) {
    Sinogram sino = load_sinogram(a.sino);
    Checkpoint ckpt = load_checkpoint(a.ckpt);
    Image out = reconstruct(sino, ckpt.params, geometry_of(sino),
                            2 * ckpt.train_n, 0.5 * ckpt.train_pixel_size);
    save_image(out, a.out);
}

void run_eval(const Args& a) {
    Image test = load_image(a.test);
    Image ref = load_image(a.ref);
    LossConfig lcfg;
    std::optional<double> mtf50, mtf10;
    if (!a.roi.empty()) {
        MtfCurve curve = mtf_edge(test, parse_roi(a.roi));
        mtf50 = mtf_at(curve, 0.5);
        mtf10 = mtf_at(curve, 0.1);
    }
    write_metrics_json(a.report, rmse(test, ref), ssim(test, ref, lcfg),
                       mtf50, mtf10, a.runtime);
}

void run_mtf(const Args& a) {
    Image img = load_image(a.img);
    save_mtf_csv(mtf_edge(img, parse_roi(a.roi)), a.report);
}

void run_baseline_bicubic(const Args& a) {
    Sinogram sino = load_sinogram(a.sino);
    auto [n, ps] = parse_grid(a.grid);
    save_image(bicubic_upscale2(fbp(sino, geometry_of(sino), n, ps)), a.out);
}

void print_diag(const char* kind, const std::string& message) {
    nlohmann::json j = {{"error", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-shot CT super-resolution pipeline"};
    app.require_subcommand(1);
    Args a;

    auto* phantom = app.add_subcommand("phantom", "Rasterize a synthetic phantom");
    phantom->add_option("--spec", a.spec, "phantom spec JSON")->required();
    phantom->add_option("--out", a.out, "output image (.ctr)")->required();

    auto* project = app.add_subcommand("project", "Forward-project an image");
    project->add_option("--img", a.img, "input image (.ctr)")->required();
    project->add_option("--geom", a.geom, "geometry JSON")->required();
    project->add_option("--out", a.out, "output sinogram (.ctr)")->required();

    auto* fbp_cmd = app.add_subcommand("fbp", "Filtered backprojection");
    fbp_cmd->add_option("--sino", a.sino, "input sinogram (.ctr)")->required();
    fbp_cmd->add_option("--grid", a.grid, "n,pixel_size")->required();
    fbp_cmd->add_option("--out", a.out, "output image (.ctr)")->required();

    auto* simlr = app.add_subcommand(
        "simulate-lr", "Derive the low-resolution training sinogram");
    simlr->add_option("--sino", a.sino, "measured sinogram (.ctr)")->required();
    simlr->add_option("--grid", a.grid, "n,pixel_size of the FBP reference")
        ->required();
    simlr->add_option("--config", a.config, "training config JSON");
    simlr->add_option("--seed", a.seed, "seed override")
        ->each([&a](const std::string&) { a.seed_set = true; });
    simlr->add_option("--out", a.out, "output sinogram (.ctr)")->required();

    auto* train_cmd = app.add_subcommand("train", "Zero-shot training");
    train_cmd->add_option("--sino", a.sino, "measured sinogram (.ctr)")->required();
    train_cmd->add_option("--grid", a.grid, "n,pixel_size of the FBP reference")
        ->required();
    train_cmd->add_option("--config", a.config, "training config JSON");
    train_cmd->add_option("--seed", a.seed, "seed override")
        ->each([&a](const std::string&) { a.seed_set = true; });
    train_cmd->add_option("--epochs", a.epochs, "epoch-count override");
    train_cmd->add_option("--out", a.out, "output checkpoint")->required();

    auto* recon = app.add_subcommand("reconstruct",
                                     "Apply a trained model at 2x resolution");
    recon->add_option("--sino", a.sino, "measured sinogram (.ctr)")->required();
    recon->add_option("--ckpt", a.ckpt, "checkpoint path")->required();
    recon->add_option("--out", a.out, "output image (.ctr)")->required();

    auto* eval_cmd = app.add_subcommand("eval", "Image-quality report");
    eval_cmd->add_option("--test", a.test, "image under test (.ctr)")->required();
    eval_cmd->add_option("--ref", a.ref, "reference image (.ctr)")->required();
    eval_cmd->add_option("--roi", a.roi,
                         "x0,y0,width,height edge region for MTF (optional)");
    eval_cmd->add_option("--runtime", a.runtime,
                         "runtime_seconds value to record (default 0)");
    eval_cmd->add_option("--report", a.report, "metrics JSON path")->required();

    auto* mtf_cmd = app.add_subcommand("mtf", "Edge-method MTF curve");
    mtf_cmd->add_option("--img", a.img, "input image (.ctr)")->required();
    mtf_cmd->add_option("--roi", a.roi, "x0,y0,width,height edge region")
        ->required();
    mtf_cmd->add_option("--report", a.report, "output CSV path")->required();

    auto* bicubic = app.add_subcommand(
        "baseline-bicubic", "FBP at native resolution, then 2x bicubic");
    bicubic->add_option("--sino", a.sino, "input sinogram (.ctr)")->required();
    bicubic->add_option("--grid", a.grid, "n,pixel_size of the native FBP")
        ->required();
    bicubic->add_option("--out", a.out, "output image (.ctr)")->required();

    phantom->callback([&] { run_phantom(a); });
    project->callback([&] { run_project(a); });
    fbp_cmd->callback([&] { run_fbp(a); });
    simlr->callback([&] { run_simulate_lr(a); });
    train_cmd->callback([&] { run_train(a); });
    recon->callback([&] { run_reconstruct(a); });
    eval_cmd->callback([&] { run_eval(a); });
    mtf_cmd->callback([&] { run_mtf(a); });
    bicubic->callback([&] { run_baseline_bicubic(a); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_diag("usage", e.what());
        return 1;
    } catch (const UsageError& e) {
        print_diag("usage", e.what());
        return 1;
    } catch (const IoError& e) {
        print_diag("format", e.what());
        return 2;
    } catch (const NumericError& e) {
        print_diag("numeric", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_diag("format", e.what());
        return 2;
    }
    return 0;
}
