#include "cabinseg/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cabinseg {

namespace {

constexpr double kD65X = 0.95047;
constexpr double kD65Y = 1.00000;
constexpr double kD65Z = 1.08883;

double srgb_decompand(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_compand(double c) {
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta ? t * t * t : 3.0 * delta * delta * (t - 4.0 / 29.0);
}

std::uint8_t to_byte(double v) {
    const double scaled = std::round(v * 255.0);
    return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

int quantize(double v) {
    return static_cast<int>(std::clamp(std::round(v * 255.0), 0.0, 255.0));
}

// HE remap over a 256-bin histogram: level q maps to
// round((cdf(q) - cdf_min) / (N - cdf_min) * 255), where cdf_min is the
// cdf at the lowest occupied bin. Identity when the histogram is
// concentrated in a single bin.
std::array<double, 256> equalization_map(const std::array<double, 256>& hist) {
    std::array<double, 256> map{};
    double total = 0.0;
    for (double c : hist) total += c;

    double cdf_min = 0.0;
    for (int q = 0; q < 256; ++q) {
        if (hist[q] > 0.0) {
            double cdf = 0.0;
            for (int b = 0; b <= q; ++b) cdf += hist[b];
            cdf_min = cdf;
            break;
        }
    }
    if (!(total - cdf_min > 0.0)) {
        for (int q = 0; q < 256; ++q) map[q] = q;
        return map;
    }
    double cdf = 0.0;
    for (int q = 0; q < 256; ++q) {
        cdf += hist[q];
        map[q] = std::round((cdf - cdf_min) / (total - cdf_min) * 255.0);
    }
    return map;
}

bool single_occupied_bin(const std::array<double, 256>& hist) {
    int occupied = 0;
    for (double c : hist)
        if (c > 0.0) ++occupied;
    return occupied <= 1;
}

}  // namespace

HsvPixel rgb_to_hsv_pixel(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double v = std::max({r, g, b});
    const double lo = std::min({r, g, b});
    const double delta = v - lo;
    HsvPixel p;
    p.v = v;
    p.s = v > 0.0 ? delta / v : 0.0;
    if (delta > 0.0) {
        double h;
        if (v == r)
            h = 60.0 * std::fmod((g - b) / delta, 6.0);
        else if (v == g)
            h = 60.0 * ((b - r) / delta + 2.0);
        else
            h = 60.0 * ((r - g) / delta + 4.0);
        if (h < 0.0) h += 360.0;
        p.h = h >= 360.0 ? h - 360.0 : h;
    }
    return p;
}

std::array<std::uint8_t, 3> hsv_to_rgb_pixel(const HsvPixel& p) {
    const double c = p.v * p.s;
    const double hp = p.h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0.0, g = 0.0, b = 0.0;
    if (hp < 1.0) {
        r = c; g = x;
    } else if (hp < 2.0) {
        r = x; g = c;
    } else if (hp < 3.0) {
        g = c; b = x;
    } else if (hp < 4.0) {
        g = x; b = c;
    } else if (hp < 5.0) {
        r = x; b = c;
    } else {
        r = c; b = x;
    }
    const double m = p.v - c;
    return {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

LabPixel rgb_to_lab_pixel(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double lr = srgb_decompand(r8 / 255.0);
    const double lg = srgb_decompand(g8 / 255.0);
    const double lb = srgb_decompand(b8 / 255.0);
    const double x = 0.4124564 * lr + 0.3575761 * lg + 0.1804375 * lb;
    const double y = 0.2126729 * lr + 0.7151522 * lg + 0.0721750 * lb;
    const double z = 0.0193339 * lr + 0.1191920 * lg + 0.9503041 * lb;
    const double fx = lab_f(x / kD65X);
    const double fy = lab_f(y / kD65Y);
    const double fz = lab_f(z / kD65Z);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<std::uint8_t, 3> lab_to_rgb_pixel(const LabPixel& p) {
    const double fy = (p.l_star + 16.0) / 116.0;
    const double fx = fy + p.a_star / 500.0;
    const double fz = fy - p.b_star / 200.0;
    const double x = kD65X * lab_f_inv(fx);
    const double y = kD65Y * lab_f_inv(fy);
    const double z = kD65Z * lab_f_inv(fz);
    const double lr = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
    const double lg = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
    const double lb = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
    return {to_byte(srgb_compand(std::clamp(lr, 0.0, 1.0))),
            to_byte(srgb_compand(std::clamp(lg, 0.0, 1.0))),
            to_byte(srgb_compand(std::clamp(lb, 0.0, 1.0)))};
}

HsvImage rgb_to_hsv(const ByteImage& img) {
    if (img.channels != 3) throw ChannelError("rgb_to_hsv expects a 3-channel image");
    HsvImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        out.pixels[i] =
            rgb_to_hsv_pixel(img.samples[3 * i], img.samples[3 * i + 1], img.samples[3 * i + 2]);
    return out;
}

LabImage rgb_to_lab(const ByteImage& img) {
    if (img.channels != 3) throw ChannelError("rgb_to_lab expects a 3-channel image");
    LabImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        out.pixels[i] =
            rgb_to_lab_pixel(img.samples[3 * i], img.samples[3 * i + 1], img.samples[3 * i + 2]);
    return out;
}

std::array<double, 2> lab_chroma_hue(const LabPixel& p) {
    const double chroma = std::sqrt(p.a_star * p.a_star + p.b_star * p.b_star);
    if (chroma == 0.0) return {0.0, 0.0};
    double hue = std::atan2(p.b_star, p.a_star) * 180.0 / 3.14159265358979323846;
    if (hue < 0.0) hue += 360.0;
    if (hue >= 360.0) hue = 0.0;
    return {chroma, hue};
}

ScalarField hist_equalize(const ScalarField& channel) {
    std::array<double, 256> hist{};
    for (double v : channel.values) hist[static_cast<std::size_t>(quantize(v))] += 1.0;
    if (single_occupied_bin(hist)) return channel;

    const std::array<double, 256> map = equalization_map(hist);
    ScalarField out(channel.width, channel.height, 0.0, {0.0, 1.0});
    for (std::size_t i = 0; i < channel.values.size(); ++i)
        out.values[i] = map[static_cast<std::size_t>(quantize(channel.values[i]))] / 255.0;
    return out;
}

ScalarField clahe(const ScalarField& channel, double clip, std::array<int, 2> tiles) {
    if (!(clip > 0.0)) throw ConfigError("clahe clip must be positive");
    const int tiles_x = tiles[0], tiles_y = tiles[1];
    if (tiles_x < 1 || tiles_y < 1) throw ConfigError("clahe tile grid must be at least 1x1");

    std::array<double, 256> global_hist{};
    for (double v : channel.values) global_hist[static_cast<std::size_t>(quantize(v))] += 1.0;
    if (single_occupied_bin(global_hist)) return channel;  // same degenerate rule as HE

    const int w = channel.width, h = channel.height;
    // Equal-size tiles; the image is padded by edge replication so every
    // tile histogram holds the same number of samples.
    const int tile_w = (w + tiles_x - 1) / tiles_x;
    const int tile_h = (h + tiles_y - 1) / tiles_y;
    const double tile_samples = static_cast<double>(tile_w) * tile_h;

    std::vector<std::array<double, 256>> maps(static_cast<std::size_t>(tiles_x) * tiles_y);
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            std::array<double, 256> hist{};
            for (int y = ty * tile_h; y < (ty + 1) * tile_h; ++y) {
                const int yy = std::min(y, h - 1);
                for (int x = tx * tile_w; x < (tx + 1) * tile_w; ++x) {
                    const int xx = std::min(x, w - 1);
                    hist[static_cast<std::size_t>(quantize(channel.at(xx, yy)))] += 1.0;
                }
            }
            auto& map = maps[static_cast<std::size_t>(ty) * tiles_x + tx];
            if (single_occupied_bin(hist)) {
                for (int q = 0; q < 256; ++q) map[q] = q;
                continue;
            }
            if (std::isfinite(clip)) {
                const double limit = clip * tile_samples / 256.0;
                double excess = 0.0;
                for (double& c : hist) {
                    if (c > limit) {
                        excess += c - limit;
                        c = limit;
                    }
                }
                const double share = excess / 256.0;
                for (double& c : hist) c += share;
            }
            map = equalization_map(hist);
        }
    }

    // Bilinear blend between the four nearest tile mappings; clamped to
    // the outermost tile centers at the borders.
    ScalarField out(w, h, 0.0, {0.0, 1.0});
    for (int y = 0; y < h; ++y) {
        const double fy = (y - tile_h / 2.0) / tile_h;
        int ty0 = static_cast<int>(std::floor(fy));
        double wy = fy - ty0;
        if (ty0 < 0) { ty0 = 0; wy = 0.0; }
        int ty1 = ty0 + 1;
        if (ty1 > tiles_y - 1) { ty1 = tiles_y - 1; ty0 = ty1; wy = 0.0; }
        for (int x = 0; x < w; ++x) {
            const double fx = (x - tile_w / 2.0) / tile_w;
            int tx0 = static_cast<int>(std::floor(fx));
            double wx = fx - tx0;
            if (tx0 < 0) { tx0 = 0; wx = 0.0; }
            int tx1 = tx0 + 1;
            if (tx1 > tiles_x - 1) { tx1 = tiles_x - 1; tx0 = tx1; wx = 0.0; }

            const int q = quantize(channel.at(x, y));
            const double m00 = maps[static_cast<std::size_t>(ty0) * tiles_x + tx0][q];
            const double m01 = maps[static_cast<std::size_t>(ty0) * tiles_x + tx1][q];
            const double m10 = maps[static_cast<std::size_t>(ty1) * tiles_x + tx0][q];
            const double m11 = maps[static_cast<std::size_t>(ty1) * tiles_x + tx1][q];
            const double top = m00 + (m01 - m00) * wx;
            const double bot = m10 + (m11 - m10) * wx;
            out.at(x, y) = (top + (bot - top) * wy) / 255.0;
        }
    }
    return out;
}

ScalarField preprocess_pcc(const ByteImage& img, const PccConfig& cfg) {
    if (img.channels != 3) throw ChannelError("preprocess_pcc expects a 3-channel image");
    ScalarField field(img.width, img.height, 0.0, {0.0, 1.0});
    if (cfg.channel == BrightnessChannel::V) {
        const HsvImage hsv = rgb_to_hsv(img);
        for (std::size_t i = 0; i < hsv.pixels.size(); ++i) field.values[i] = hsv.pixels[i].v;
    } else {
        const LabImage lab = rgb_to_lab(img);
        for (std::size_t i = 0; i < lab.pixels.size(); ++i)
            field.values[i] = std::clamp(lab.pixels[i].l_star / 100.0, 0.0, 1.0);
    }
    switch (cfg.enhancement) {
        case Enhancement::None:
            return field;
        case Enhancement::HistogramEqualization:
            return hist_equalize(field);
        case Enhancement::Clahe:
            return clahe(field, cfg.clahe_clip, cfg.clahe_tiles);
    }
    return field;
}

}  // namespace cabinseg
