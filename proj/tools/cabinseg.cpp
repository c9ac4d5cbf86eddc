#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cabinseg/experiment.hpp"
#include "cabinseg/image_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cabinseg;

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitDimension = 3;

struct MethodArgs {
    std::string config_path;
    std::string frames;
    std::string image;
    std::string gt;
    std::string out;
    std::optional<std::int64_t> seed;
};

void add_common_flags(CLI::App* cmd, MethodArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config JSON")->required();
    cmd->add_option("--frames", args.frames, "frame directory (overrides config)");
    cmd->add_option("--image", args.image, "single input image (overrides config)");
    cmd->add_option("--gt", args.gt, "ground-truth directory (overrides config)");
    cmd->add_option("--out", args.out, "output directory (overrides config)");
    cmd->add_option("--seed", args.seed, "seed (overrides config)");
}

ExperimentConfig make_config(const MethodArgs& args, Method method, const char* name) {
    ExperimentConfig cfg = parse_config(args.config_path);
    if (cfg.method != method)
        throw ConfigError(std::string("config method does not match subcommand ") + name);
    if (!args.frames.empty()) cfg.frames_dir = args.frames;
    if (!args.image.empty()) {
        // A single image acts as a one-frame selection within its directory.
        const fs::path image = args.image;
        cfg.frames_dir = image.parent_path().empty() ? "." : image.parent_path();
        const FrameSequence seq = load_sequence(cfg.frames_dir);
        bool found = false;
        for (std::size_t i = 0; i < seq.frames.size(); ++i)
            if (seq.frames[i].filename() == image.filename()) {
                cfg.snake_frames = {static_cast<int>(i)};
                found = true;
            }
        if (!found) throw IoError("image not found: " + image.string());
    }
    if (!args.gt.empty()) {
        cfg.gt_dir = args.gt;
        cfg.evaluate = true;
    }
    if (!args.out.empty()) cfg.output_dir = args.out;
    if (args.seed) cfg.seed = static_cast<std::uint64_t>(*args.seed);
    return cfg;
}

void print_summary(const RunSummary& summary) {
    std::cout << "frames processed: " << summary.frames_processed << '\n';
    if (!summary.degenerate_frames.empty()) {
        std::cout << "degenerate frames:";
        for (int f : summary.degenerate_frames) std::cout << ' ' << f;
        std::cout << '\n';
    }
    if (summary.report && summary.report->mean.sim)
        std::cout << "mean similarity: " << *summary.report->mean.sim << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Background-foreground segmentation toolkit"};
    app.require_subcommand(1);

    MethodArgs gmm_args, macwe_args, mgac_args;
    auto* gmm_cmd = app.add_subcommand("gmm", "adaptive mixture background subtraction");
    add_common_flags(gmm_cmd, gmm_args);
    auto* macwe_cmd = app.add_subcommand("macwe", "morphological active contours without edges");
    add_common_flags(macwe_cmd, macwe_args);
    auto* mgac_cmd = app.add_subcommand("mgac", "morphological geodesic active contours");
    add_common_flags(mgac_cmd, mgac_args);

    std::string eval_pred, eval_gt, eval_out;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate predicted masks against ground truth");
    eval_cmd->add_option("--pred", eval_pred, "directory of predicted masks")->required();
    eval_cmd->add_option("--gt", eval_gt, "directory of ground-truth masks")->required();
    eval_cmd->add_option("--out", eval_out, "output directory")->required();

    std::string overlay_pred, overlay_gt, overlay_out;
    auto* overlay_cmd = app.add_subcommand("overlay", "render a TP/FP/TN/FN overlay");
    overlay_cmd->add_option("--pred", overlay_pred, "predicted mask PNG")->required();
    overlay_cmd->add_option("--gt", overlay_gt, "ground-truth mask PNG")->required();
    overlay_cmd->add_option("--out", overlay_out, "output PNG")->required();

    std::string synth_spec, synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic labeled sequence");
    synth_cmd->add_option("--spec", synth_spec, "synthetic scene spec JSON")->required();
    synth_cmd->add_option("--out", synth_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gmm_cmd->parsed()) {
            print_summary(run_experiment(make_config(gmm_args, Method::Gmm, "gmm")));
        } else if (macwe_cmd->parsed()) {
            print_summary(run_experiment(make_config(macwe_args, Method::Macwe, "macwe")));
        } else if (mgac_cmd->parsed()) {
            print_summary(run_experiment(make_config(mgac_args, Method::Mgac, "mgac")));
        } else if (eval_cmd->parsed()) {
            const BatchReport report = evaluate_directories(eval_pred, eval_gt, eval_out);
            if (report.mean.sim) std::cout << "mean similarity: " << *report.mean.sim << '\n';
        } else if (overlay_cmd->parsed()) {
            const BinaryMask pred = load_mask(overlay_pred);
            const BinaryMask gt = load_mask(overlay_gt);
            save_image(render_overlay(pred, gt), overlay_out);
        } else if (synth_cmd->parsed()) {
            write_synth_dataset(parse_synth_spec(synth_spec), synth_out);
        }
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << '\n';
        return kExitDimension;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
