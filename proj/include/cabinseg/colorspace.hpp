#pragma once

#include <array>
#include <vector>

#include "cabinseg/image.hpp"

namespace cabinseg {

/// Hue in degrees [0,360), saturation and value in [0,1].
/// Hue is 0 by convention when saturation is 0.
struct HsvPixel {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

/// CIELAB. l_star in [0,100] for in-gamut sRGB, a/b signed chroma axes.
struct LabPixel {
    double l_star = 0.0;
    double a_star = 0.0;
    double b_star = 0.0;
};

template <typename P>
struct PixelGrid {
    int width = 0;
    int height = 0;
    std::vector<P> pixels;

    PixelGrid() = default;
    PixelGrid(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h) {}
    P& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const P& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

using HsvImage = PixelGrid<HsvPixel>;
using LabImage = PixelGrid<LabPixel>;

enum class BrightnessChannel { V, L };
enum class Enhancement { None, HistogramEqualization, Clahe };

/// Brightness-channel pre-processing: extract V (HSV) or L (Lab,
/// rescaled to [0,1]) and optionally enhance the contrast.
struct PccConfig {
    BrightnessChannel channel = BrightnessChannel::V;
    Enhancement enhancement = Enhancement::None;
    double clahe_clip = 2.0;          // histogram-count units of tile_size/256
    std::array<int, 2> clahe_tiles = {8, 8};  // columns x rows
};

HsvPixel rgb_to_hsv_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> hsv_to_rgb_pixel(const HsvPixel& p);
LabPixel rgb_to_lab_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> lab_to_rgb_pixel(const LabPixel& p);

/// Hexcone HSV conversion; throws ChannelError on 1-channel input.
HsvImage rgb_to_hsv(const ByteImage& img);

/// sRGB (D65) -> XYZ -> CIELAB; throws ChannelError on 1-channel input.
LabImage rgb_to_lab(const ByteImage& img);

/// Chroma sqrt(a*^2+b*^2) and hue atan2(b*,a*) mapped to [0,360).
/// Hue is 0 when chroma is 0.
std::array<double, 2> lab_chroma_hue(const LabPixel& p);

/// Histogram equalization over 256 bins. Constant inputs are returned
/// unchanged (the remap is 0/0 there).
ScalarField hist_equalize(const ScalarField& channel);

/// Contrast-limited adaptive histogram equalization. clip is in
/// histogram-count units normalized by tile_size/256; pass infinity to
/// disable clipping. Tile mappings are blended bilinearly.
ScalarField clahe(const ScalarField& channel, double clip, std::array<int, 2> tiles);

/// Apply the configured channel extraction and enhancement.
ScalarField preprocess_pcc(const ByteImage& img, const PccConfig& cfg);

}  // namespace cabinseg
