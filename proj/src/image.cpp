#include "cabinseg/image.hpp"

#include <algorithm>

namespace cabinseg {

ByteImage::ByteImage(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c) {
    if (w < 1 || h < 1) throw ConfigError("image dimensions must be >= 1");
    if (c != 1 && c != 3) throw ChannelError("channel count must be 1 or 3");
    samples.assign(static_cast<std::size_t>(w) * h * c, fill);
}

ScalarField::ScalarField(int w, int h, double fill, ValueRange r)
    : width(w), height(h), range(r) {
    if (w < 1 || h < 1) throw ConfigError("field dimensions must be >= 1");
    values.assign(static_cast<std::size_t>(w) * h, fill);
}

BinaryMask::BinaryMask(int w, int h, bool fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw ConfigError("mask dimensions must be >= 1");
    bits.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

std::size_t BinaryMask::count_true() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

ScalarField to_grayscale(const ByteImage& img) { return to_grayscale(img, LumaWeights{}); }

ScalarField to_grayscale(const ByteImage& img, LumaWeights weights) {
    if (img.channels != 1 && img.channels != 3)
        throw ChannelError("to_grayscale expects 1 or 3 channels");
    ScalarField out(img.width, img.height, 0.0, {0.0, 1.0});
    const std::size_t n = img.pixel_count();
    if (img.channels == 1) {
        for (std::size_t i = 0; i < n; ++i) out.values[i] = img.samples[i] / 255.0;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double luma = weights.r * img.samples[3 * i] +
                                weights.g * img.samples[3 * i + 1] +
                                weights.b * img.samples[3 * i + 2];
            out.values[i] = luma / 255.0;
        }
    }
    return out;
}

ByteImage mask_to_image(const BinaryMask& mask) {
    ByteImage img(mask.width, mask.height, 1);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        img.samples[i] = mask.bits[i] ? 255 : 0;
    return img;
}

BinaryMask image_to_mask(const ByteImage& img) {
    if (img.channels != 1) throw ChannelError("image_to_mask expects a single channel");
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.samples.size(); ++i)
        mask.bits[i] = img.samples[i] >= 128 ? 1 : 0;
    return mask;
}

}  // namespace cabinseg
