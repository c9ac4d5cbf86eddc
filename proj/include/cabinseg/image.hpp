#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "cabinseg/error.hpp"

namespace cabinseg {

/// 8-bit image, row-major, channel-interleaved. channels is 1 or 3.
struct ByteImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> samples;

    ByteImage() = default;
    ByteImage(int w, int h, int c, std::uint8_t fill = 0);

    std::uint8_t& at(int x, int y, int c = 0) {
        return samples[static_cast<std::size_t>((y * width + x) * channels + c)];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return samples[static_cast<std::size_t>((y * width + x) * channels + c)];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

/// Inclusive value range of a ScalarField.
struct ValueRange {
    double lo = 0.0;
    double hi = 1.0;
};

/// Real-valued image plane with a declared value range.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    ValueRange range{0.0, 1.0};

    ScalarField() = default;
    ScalarField(int w, int h, double fill = 0.0, ValueRange r = {0.0, 1.0});

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return values.size(); }
};

/// Boolean grid, true = foreground.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    /// Reads outside the grid are background.
    bool get_clamped(int x, int y) const {
        if (x < 0 || x >= width || y < 0 || y >= height) return false;
        return get(x, y);
    }
    std::size_t count_true() const;
    bool operator==(const BinaryMask& other) const = default;
};

/// Ordered list of frame files forming one video sequence.
struct FrameSequence {
    std::vector<std::filesystem::path> frames;
    std::optional<double> frame_rate;
};

inline void require_same_size(int wa, int ha, int wb, int hb, const char* what) {
    if (wa != wb || ha != hb)
        throw DimensionError(std::string(what) + ": " + std::to_string(wa) + "x" +
                             std::to_string(ha) + " vs " + std::to_string(wb) + "x" +
                             std::to_string(hb));
}

/// Grayscale conversion into [0,1]. 3-channel input uses BT.601 luma
/// weights; 1-channel input is rescaled by 1/255.
ScalarField to_grayscale(const ByteImage& img);

/// Luma weights used by to_grayscale.
struct LumaWeights {
    double r = 0.299;
    double g = 0.587;
    double b = 0.114;
};
ScalarField to_grayscale(const ByteImage& img, LumaWeights weights);

/// Mask rendered as a single-channel image, foreground = 255.
ByteImage mask_to_image(const BinaryMask& mask);

/// Single-channel image thresholded at 128 back into a mask.
BinaryMask image_to_mask(const ByteImage& img);

}  // namespace cabinseg
