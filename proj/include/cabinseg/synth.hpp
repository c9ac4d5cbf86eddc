#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cabinseg/image.hpp"

namespace cabinseg {

enum class Scenario { Static, MovingSquare, Disk, IlluminationRamp };

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

/// Deterministic synthetic scene description. All randomness derives
/// from the seed through a pinned generator, so output is bit-identical
/// across platforms.
struct SynthSpec {
    int width = 64;
    int height = 64;
    std::uint64_t seed = 0;
    double noise_sigma = 0.0;  // additive Gaussian pixel noise, [0,1] units
    Scenario scenario = Scenario::Static;

    void validate() const;
};

/// A frame plus its exact ground-truth foreground mask.
struct LabeledFrame {
    ByteImage frame;
    BinaryMask gt;
};

/// Generate a sequence for the configured scenario:
///  - static: fixed textured background, gt all-false
///  - moving_square: a contrasting 10x10 square translating 1 px/frame
///    along x with wraparound, gt = square
///  - disk: every frame is the centered disk scene, gt = disk
///  - illumination_ramp: static scene whose brightness ramps linearly
///    from -20% to +20% over the run, gt all-false
std::vector<LabeledFrame> gen_sequence(const SynthSpec& spec, int n_frames);

/// Centered filled disk of fg_level over bg_level plus seeded noise.
LabeledFrame gen_disk_image(const SynthSpec& spec, int radius, double fg_level, double bg_level);

}  // namespace cabinseg
