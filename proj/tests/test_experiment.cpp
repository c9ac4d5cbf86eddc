#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cabinseg/experiment.hpp"
#include "cabinseg/image_io.hpp"

using namespace cabinseg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "cabinseg_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

SynthJob small_job(Scenario scenario, int frames, double noise) {
    SynthJob job;
    job.spec.width = 32;
    job.spec.height = 32;
    job.spec.seed = 21;
    job.spec.noise_sigma = noise;
    job.spec.scenario = scenario;
    job.frames = frames;
    return job;
}

}  // namespace

TEST_CASE("synth dataset layout and determinism") {
    const fs::path out_a = fresh_dir("synth_a");
    const fs::path out_b = fresh_dir("synth_b");
    const SynthJob job = small_job(Scenario::MovingSquare, 6, 0.03);
    write_synth_dataset(job, out_a);
    write_synth_dataset(job, out_b);

    const FrameSequence frames = load_sequence(out_a / "frames");
    const FrameSequence gts = load_sequence(out_a / "gt");
    CHECK(frames.frames.size() == 6);
    CHECK(gts.frames.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(slurp(frames.frames[i]) ==
              slurp(out_b / "frames" / frames.frames[i].filename()));
    }
    CHECK(fs::exists(out_a / "manifest.json"));
}

TEST_CASE("gmm experiment writes masks, csv, overlays and a manifest") {
    const fs::path data = fresh_dir("exp_data");
    write_synth_dataset(small_job(Scenario::MovingSquare, 30, 0.02), data);

    ExperimentConfig cfg;
    cfg.method = Method::Gmm;
    cfg.frames_dir = data / "frames";
    cfg.gt_dir = data / "gt";
    cfg.evaluate = true;
    cfg.output_dir = fresh_dir("exp_out");
    cfg.post = PostConfig{PostOp::Closing, "square3"};

    const RunSummary summary = run_experiment(cfg);
    CHECK(summary.frames_processed == 30);
    REQUIRE(summary.report.has_value());
    CHECK(summary.report->per_image.size() == 30);
    CHECK(fs::exists(cfg.output_dir / "masks" / "mask_000000.png"));
    CHECK(fs::exists(cfg.output_dir / "overlays" / "overlay_000029.png"));
    CHECK(fs::exists(cfg.output_dir / "metrics.csv"));
    CHECK(fs::exists(cfg.output_dir / "manifest.json"));

    const std::string csv = slurp(cfg.output_dir / "metrics.csv");
    // header + 30 rows + mean row
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 32);
    CHECK(csv.rfind("mean,") != std::string::npos);

    const json manifest = json::parse(slurp(cfg.output_dir / "manifest.json"));
    CHECK(manifest["artifact_version"] == kArtifactVersion);
    CHECK(manifest["config"]["post"]["op"] == "closing");
    CHECK(manifest["frames_processed"] == 30);
}

TEST_CASE("eval restriction limits the metrics rows") {
    const fs::path data = fresh_dir("trim_data");
    write_synth_dataset(small_job(Scenario::MovingSquare, 12, 0.02), data);

    ExperimentConfig cfg;
    cfg.method = Method::Gmm;
    cfg.frames_dir = data / "frames";
    cfg.gt_dir = data / "gt";
    cfg.evaluate = true;
    cfg.eval_frames = {8, 9, 10, 11};
    cfg.output_dir = fresh_dir("trim_out");
    const RunSummary summary = run_experiment(cfg);
    REQUIRE(summary.report.has_value());
    CHECK(summary.report->per_image.size() == 4);
    CHECK(summary.frames_processed == 12);  // masks still written for all
    CHECK(fs::exists(cfg.output_dir / "masks" / "mask_000000.png"));
}

TEST_CASE("macwe experiment runs on selected frames") {
    const fs::path data = fresh_dir("snake_data");
    SynthJob job = small_job(Scenario::Disk, 3, 0.03);
    write_synth_dataset(job, data);

    ExperimentConfig cfg;
    cfg.method = Method::Macwe;
    cfg.macwe.iterations = 60;
    cfg.contour.circles = {{16.0, 16.0, 4.0}};
    cfg.snake_frames = {1};
    cfg.frames_dir = data / "frames";
    cfg.gt_dir = data / "gt";
    cfg.evaluate = true;
    cfg.output_dir = fresh_dir("snake_out");

    const RunSummary summary = run_experiment(cfg);
    CHECK(summary.frames_processed == 1);
    REQUIRE(summary.report.has_value());
    REQUIRE(summary.report->per_image.size() == 1);
    CHECK(*summary.report->per_image[0].sim > 0.8);
    CHECK(fs::exists(cfg.output_dir / "masks" / "mask_000001.png"));
}

TEST_CASE("experiments are byte-identical across runs") {
    const fs::path data = fresh_dir("repro_data");
    write_synth_dataset(small_job(Scenario::MovingSquare, 20, 0.05), data);

    auto run_into = [&](const char* name) {
        ExperimentConfig cfg;
        cfg.method = Method::Gmm;
        cfg.frames_dir = data / "frames";
        cfg.gt_dir = data / "gt";
        cfg.evaluate = true;
        cfg.post = PostConfig{PostOp::Closing, "square3"};
        cfg.output_dir = fresh_dir(name);
        run_experiment(cfg);
        return cfg.output_dir;
    };
    const fs::path a = run_into("repro_a");
    const fs::path b = run_into("repro_b");

    CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
    for (int i = 0; i < 20; ++i) {
        char mask[32], ovl[32];
        std::snprintf(mask, sizeof(mask), "mask_%06d.png", i);
        std::snprintf(ovl, sizeof(ovl), "overlay_%06d.png", i);
        CHECK(slurp(a / "masks" / mask) == slurp(b / "masks" / mask));
        CHECK(slurp(a / "overlays" / ovl) == slurp(b / "overlays" / ovl));
    }
}

TEST_CASE("per-circle evolution unions the individual runs") {
    const fs::path data = fresh_dir("percircle_data");
    write_synth_dataset(small_job(Scenario::Disk, 1, 0.02), data);

    ExperimentConfig cfg;
    cfg.method = Method::Macwe;
    cfg.macwe.iterations = 40;
    cfg.contour.circles = {{16.0, 16.0, 3.0}, {16.0, 16.0, 5.0}};
    cfg.frames_dir = data / "frames";
    cfg.output_dir = fresh_dir("percircle_joint");
    run_experiment(cfg);
    const BinaryMask joint = load_mask(cfg.output_dir / "masks" / "mask_000000.png");

    cfg.joint_evolution = false;
    cfg.output_dir = fresh_dir("percircle_split");
    run_experiment(cfg);
    const BinaryMask split = load_mask(cfg.output_dir / "masks" / "mask_000000.png");

    // both settle on the bright disk in this easy scene
    CHECK(joint.count_true() > 0);
    CHECK(split.count_true() > 0);
}

TEST_CASE("post element accepts explicit offsets and the manifest logs the pipeline") {
    const fs::path data = fresh_dir("offsets_data");
    write_synth_dataset(small_job(Scenario::MovingSquare, 8, 0.02), data);

    ExperimentConfig cfg;
    cfg.method = Method::Gmm;
    cfg.frames_dir = data / "frames";
    cfg.gt_dir = data / "gt";
    cfg.evaluate = true;
    PostConfig post;
    post.op = PostOp::Closing;
    post.element.clear();
    post.offsets = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    cfg.post = post;
    cfg.pcc = PccConfig{};
    cfg.output_dir = fresh_dir("offsets_out");
    run_experiment(cfg);

    const json manifest = json::parse(slurp(cfg.output_dir / "manifest.json"));
    const json stages = manifest["pipeline"];
    REQUIRE(stages.size() == 4);
    CHECK(stages[0] == "pcc");
    CHECK(stages[1] == "gmm");
    CHECK(stages[2] == "closing");
    CHECK(stages[3] == "eval");
    CHECK(manifest["config"]["post"]["element"].is_array());
}

TEST_CASE("evaluate_directories scores saved masks") {
    const fs::path data = fresh_dir("evaldir_data");
    write_synth_dataset(small_job(Scenario::MovingSquare, 4, 0.0), data);
    // predictions = ground truth, so similarity is 1
    const BatchReport report =
        evaluate_directories(data / "gt", data / "gt", fresh_dir("evaldir_out"));
    CHECK(*report.mean.sim == doctest::Approx(1.0));
}

TEST_CASE("missing inputs raise io errors") {
    ExperimentConfig cfg;
    cfg.method = Method::Gmm;
    cfg.frames_dir = "/nonexistent/frames";
    cfg.output_dir = fresh_dir("io_out");
    CHECK_THROWS_AS(run_experiment(cfg), IoError);
}
