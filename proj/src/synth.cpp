#include "cabinseg/synth.hpp"

#include <algorithm>
#include <cmath>

#include "cabinseg/rng.hpp"

namespace cabinseg {

namespace {

constexpr int kSquareSize = 10;
constexpr double kSquareLevel = 0.9;
constexpr double kTextureLo = 0.25;
constexpr double kTextureHi = 0.55;
constexpr double kRampSpan = 0.2;  // +-20% brightness over the run

std::uint8_t quantize(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::round(v * 255.0), 0.0, 255.0));
}

// Independent noise stream per frame so frames are generable in any order.
Rng frame_rng(std::uint64_t seed, int frame) {
    return Rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(frame + 1)));
}

ByteImage render(const std::vector<double>& levels, int w, int h, double noise_sigma, Rng& rng) {
    ByteImage img(w, h, 3);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        double v = levels[i];
        if (noise_sigma > 0.0) v += noise_sigma * rng.next_gauss();
        const std::uint8_t b = quantize(std::clamp(v, 0.0, 1.0));
        img.samples[3 * i] = b;
        img.samples[3 * i + 1] = b;
        img.samples[3 * i + 2] = b;
    }
    return img;
}

std::vector<double> texture(const SynthSpec& spec) {
    Rng rng(spec.seed);
    std::vector<double> base(static_cast<std::size_t>(spec.width) * spec.height);
    for (double& v : base) v = rng.uniform(kTextureLo, kTextureHi);
    return base;
}

}  // namespace

Scenario scenario_from_name(const std::string& name) {
    if (name == "static") return Scenario::Static;
    if (name == "moving_square") return Scenario::MovingSquare;
    if (name == "disk") return Scenario::Disk;
    if (name == "illumination_ramp") return Scenario::IlluminationRamp;
    throw ConfigError("unknown scenario: " + name);
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Static: return "static";
        case Scenario::MovingSquare: return "moving_square";
        case Scenario::Disk: return "disk";
        case Scenario::IlluminationRamp: return "illumination_ramp";
    }
    return "static";
}

void SynthSpec::validate() const {
    if (width < 1 || height < 1) throw ConfigError("synth dimensions must be >= 1");
    if (noise_sigma < 0.0) throw ConfigError("synth noise_sigma must be >= 0");
}

std::vector<LabeledFrame> gen_sequence(const SynthSpec& spec, int n_frames) {
    spec.validate();
    if (n_frames < 1) throw ConfigError("synth sequence needs at least one frame");
    const int w = spec.width, h = spec.height;
    const std::vector<double> base = texture(spec);

    std::vector<LabeledFrame> frames;
    frames.reserve(static_cast<std::size_t>(n_frames));
    for (int t = 0; t < n_frames; ++t) {
        std::vector<double> levels = base;
        BinaryMask gt(w, h);

        switch (spec.scenario) {
            case Scenario::Static:
                break;
            case Scenario::MovingSquare: {
                if (w < kSquareSize || h < kSquareSize)
                    throw ConfigError("image too small for the moving square");
                const int y0 = (h - kSquareSize) / 2;
                for (int dy = 0; dy < kSquareSize; ++dy)
                    for (int dx = 0; dx < kSquareSize; ++dx) {
                        const int x = (t + dx) % w;
                        const int y = y0 + dy;
                        levels[static_cast<std::size_t>(y) * w + x] = kSquareLevel;
                        gt.set(x, y, true);
                    }
                break;
            }
            case Scenario::Disk: {
                const int radius = std::min(w, h) / 3;
                const int cx = w / 2, cy = h / 2;
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x)
                        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) {
                            levels[static_cast<std::size_t>(y) * w + x] = kSquareLevel;
                            gt.set(x, y, true);
                        }
                break;
            }
            case Scenario::IlluminationRamp: {
                const double factor =
                    n_frames > 1
                        ? 1.0 - kRampSpan + 2.0 * kRampSpan * t / (n_frames - 1)
                        : 1.0;
                for (double& v : levels) v *= factor;
                break;
            }
        }

        Rng rng = frame_rng(spec.seed, t);
        frames.push_back({render(levels, w, h, spec.noise_sigma, rng), std::move(gt)});
    }
    return frames;
}

LabeledFrame gen_disk_image(const SynthSpec& spec, int radius, double fg_level,
                            double bg_level) {
    spec.validate();
    const int w = spec.width, h = spec.height;
    const int cx = w / 2, cy = h / 2;
    if (radius < 0 || cx - radius < 0 || cx + radius >= w || cy - radius < 0 ||
        cy + radius >= h)
        throw ConfigError("disk does not fit in the image");

    std::vector<double> levels(static_cast<std::size_t>(w) * h, bg_level);
    BinaryMask gt(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) {
                levels[static_cast<std::size_t>(y) * w + x] = fg_level;
                gt.set(x, y, true);
            }

    Rng rng(spec.seed);
    return {render(levels, w, h, spec.noise_sigma, rng), std::move(gt)};
}

}  // namespace cabinseg
