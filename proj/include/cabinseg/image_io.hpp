#pragma once

#include <filesystem>

#include "cabinseg/image.hpp"

namespace cabinseg {

/// Decode a PNG or binary PPM/PGM file. 16-bit inputs are rejected;
/// palette PNGs are expanded and alpha is stripped.
ByteImage load_image(const std::filesystem::path& path);

/// Encode as 8-bit PNG (grayscale or RGB depending on channels).
void save_image(const ByteImage& img, const std::filesystem::path& path);

/// Mask written as a single-channel PNG, foreground = 255, background = 0.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

/// Load a mask previously written by save_mask (threshold at 128).
BinaryMask load_mask(const std::filesystem::path& path);

/// Collect the image files of a directory, lexicographically sorted.
FrameSequence load_sequence(const std::filesystem::path& dir);

}  // namespace cabinseg
