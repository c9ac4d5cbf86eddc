#pragma once

#include <optional>

#include "cabinseg/config.hpp"
#include "cabinseg/metrics.hpp"

namespace cabinseg {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Summary of one run; the detailed manifest is written to disk.
struct RunSummary {
    int frames_processed = 0;
    std::vector<int> degenerate_frames;
    std::optional<BatchReport> report;  // present when evaluation ran
};

/// Execute a configured experiment: optional pre-processing, the
/// selected method, optional mask post-processing, then evaluation when
/// ground truth is available. Masks, overlays, metrics.csv and
/// manifest.json are written into the output directory.
RunSummary run_experiment(const ExperimentConfig& cfg);

/// Evaluate already-written prediction masks against ground truth;
/// writes metrics.csv and overlays into output_dir.
BatchReport evaluate_directories(const std::filesystem::path& pred_dir,
                                 const std::filesystem::path& gt_dir,
                                 const std::filesystem::path& output_dir);

/// Generate a synthetic sequence to disk: frames/, gt/, manifest.json.
void write_synth_dataset(const SynthJob& job, const std::filesystem::path& output_dir);

}  // namespace cabinseg
