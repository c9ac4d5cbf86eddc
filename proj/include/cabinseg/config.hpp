#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cabinseg/colorspace.hpp"
#include "cabinseg/gmm.hpp"
#include "cabinseg/snakes.hpp"
#include "cabinseg/synth.hpp"

namespace cabinseg {

enum class Method { Gmm, Macwe, Mgac };

enum class PostOp { Opening, Closing };

/// Mask post-processing applied to predicted masks only. The element is
/// either a named kernel ("square3", "square5", "cross3") or an explicit
/// offset list.
struct PostConfig {
    PostOp op = PostOp::Closing;
    std::string element = "square3";  // empty when offsets are explicit
    std::vector<std::pair<int, int>> offsets;

    StructuringElement structuring_element() const {
        return offsets.empty() ? StructuringElement::from_name(element)
                               : StructuringElement::from_offsets(offsets);
    }
};

/// One experiment: method, optional pre-processing, optional mask
/// post-processing, inputs and outputs.
struct ExperimentConfig {
    Method method = Method::Gmm;
    GmmParams gmm;
    MacweParams macwe;
    MgacParams mgac;
    GimageParams gimage;
    ContourInit contour;  // used by the snake methods
    std::optional<PccConfig> pcc;
    std::optional<PostConfig> post;
    std::filesystem::path frames_dir;
    std::filesystem::path gt_dir;  // empty = no evaluation
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    bool evaluate = false;          // set when a gt dir is given or requested
    std::vector<int> eval_frames;   // gmm: restrict evaluation; empty = all
    std::vector<int> snake_frames = {0};  // macwe/mgac: frames to segment
    bool joint_evolution = true;    // snakes: evolve circle union jointly

    void validate() const;
};

/// Parse and validate an experiment config file. Unknown keys and type
/// mismatches raise ConfigError with the offending JSON path.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const nlohmann::json& j);

/// Normalized echo of the effective configuration (defaults filled).
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Parse a synthetic-scene spec file: SynthSpec fields plus "frames".
struct SynthJob {
    SynthSpec spec;
    int frames = 1;
};
SynthJob parse_synth_spec(const std::filesystem::path& path);

PccConfig parse_pcc_json(const nlohmann::json& j, const std::string& path);

}  // namespace cabinseg
