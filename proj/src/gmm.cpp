#include "cabinseg/gmm.hpp"

#include <algorithm>
#include <cmath>

namespace cabinseg {

void GmmParams::validate() const {
    if (history < 1) throw ConfigError("gmm history must be >= 1");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("gmm tau must be in (0,1)");
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0))
        throw ConfigError("gmm alpha must be in (0,1)");
    if (!(match_k > 0.0)) throw ConfigError("gmm match_k must be positive");
    if (k_max < 1) throw ConfigError("gmm k_max must be >= 1");
    if (!(var_min > 0.0 && var_min <= sigma0_sq && sigma0_sq <= var_max))
        throw ConfigError("gmm variance bounds must satisfy 0 < var_min <= sigma0_sq <= var_max");
    if (complexity_prior < 0.0) throw ConfigError("gmm complexity prior must be >= 0");
    if (min_area < 0) throw ConfigError("gmm min_area must be >= 0");
}

namespace {

double squared_distance(const PixelValue& x, const MixtureComponent& c, int channels) {
    double d2 = 0.0;
    for (int ch = 0; ch < channels; ++ch) {
        const double d = x[static_cast<std::size_t>(ch)] - c.mu[static_cast<std::size_t>(ch)];
        d2 += d * d;
    }
    return d2;
}

void sort_by_rank(PixelMixture& mixture) {
    std::stable_sort(mixture.begin(), mixture.end(),
                     [](const MixtureComponent& a, const MixtureComponent& b) {
                         return a.w / std::sqrt(a.var) > b.w / std::sqrt(b.var);
                     });
}

}  // namespace

bool match_component(const PixelValue& x, const MixtureComponent& c, int channels,
                     double match_k) {
    return squared_distance(x, c, channels) <= match_k * match_k * c.var;
}

void update_pixel(PixelMixture& mixture, const PixelValue& x, int channels, double alpha,
                  const GmmParams& params) {
    // First match in sorted order wins.
    int matched = -1;
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        if (match_component(x, mixture[i], channels, params.match_k)) {
            matched = static_cast<int>(i);
            break;
        }
    }

    // Weight update runs for every component, matched or not.
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        const double m = static_cast<int>(i) == matched ? 1.0 : 0.0;
        mixture[i].w = mixture[i].w + alpha * (m - mixture[i].w) - alpha * params.complexity_prior;
    }

    if (matched >= 0) {
        MixtureComponent& c = mixture[static_cast<std::size_t>(matched)];
        double rho;
        if (params.rho_mode == RhoMode::AdaptiveWeight) {
            rho = alpha / c.w;
        } else {
            // Isotropic Gaussian density; can exceed 1 for tight
            // variances, so the resulting rate is capped.
            const double d2 = squared_distance(x, c, channels);
            const double norm =
                std::pow(2.0 * 3.14159265358979323846 * c.var, -0.5 * channels);
            rho = alpha * norm * std::exp(-d2 / (2.0 * c.var));
        }
        rho = std::min(rho, 1.0);
        for (int ch = 0; ch < channels; ++ch) {
            const std::size_t s = static_cast<std::size_t>(ch);
            c.mu[s] = (1.0 - rho) * c.mu[s] + rho * x[s];
        }
        const double d2_new = squared_distance(x, c, channels);
        c.var = (1.0 - rho) * c.var + rho * d2_new;
        c.var = std::clamp(c.var, params.var_min, params.var_max);
    }

    mixture.erase(std::remove_if(mixture.begin(), mixture.end(),
                                 [](const MixtureComponent& c) { return c.w <= 0.0; }),
                  mixture.end());

    if (matched < 0) {
        MixtureComponent fresh;
        fresh.w = alpha;
        fresh.mu = x;
        fresh.var = params.sigma0_sq;
        if (static_cast<int>(mixture.size()) < params.k_max)
            mixture.push_back(fresh);
        else
            mixture.back() = fresh;  // lowest-ranked slot
    }

    double sum = 0.0;
    for (const MixtureComponent& c : mixture) sum += c.w;
    for (MixtureComponent& c : mixture) c.w /= sum;

    sort_by_rank(mixture);
}

bool classify_pixel(const PixelMixture& mixture, const PixelValue& x, int channels,
                    const GmmParams& params) {
    if (mixture.empty()) return true;
    std::size_t background_count = 0;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        cumulative += mixture[i].w;
        ++background_count;
        if (cumulative > params.tau) break;
    }
    for (std::size_t i = 0; i < background_count; ++i)
        if (match_component(x, mixture[i], channels, params.match_k)) return false;
    return true;
}

BackgroundModel::BackgroundModel(int width, int height, int channels, GmmParams params)
    : width_(width), height_(height), channels_(channels), params_(params) {
    if (width < 1 || height < 1) throw ConfigError("model dimensions must be >= 1");
    if (channels != 1 && channels != 3) throw ChannelError("model channels must be 1 or 3");
    params_.validate();
    mixtures_.resize(static_cast<std::size_t>(width) * height);
}

BinaryMask BackgroundModel::process_frame(const ByteImage& frame) {
    require_same_size(frame.width, frame.height, width_, height_, "gmm frame");
    if (frame.channels != channels_)
        throw ChannelError("frame channel count does not match the model");
    std::vector<double> values(frame.samples.size());
    for (std::size_t i = 0; i < frame.samples.size(); ++i) values[i] = frame.samples[i] / 255.0;
    return process_values(values);
}

BinaryMask BackgroundModel::process_frame(const ScalarField& frame) {
    require_same_size(frame.width, frame.height, width_, height_, "gmm frame");
    if (channels_ != 1) throw ChannelError("scalar frames require a single-channel model");
    return process_values(frame.values);
}

BinaryMask BackgroundModel::process_values(const std::vector<double>& values) {
    ++frames_seen_;
    const double alpha =
        params_.alpha ? *params_.alpha : 1.0 / std::min(frames_seen_, params_.history);

    BinaryMask mask(width_, height_);
    const std::size_t n = static_cast<std::size_t>(width_) * height_;
    for (std::size_t p = 0; p < n; ++p) {
        PixelValue x = {0.0, 0.0, 0.0};
        for (int ch = 0; ch < channels_; ++ch)
            x[static_cast<std::size_t>(ch)] = values[p * channels_ + ch];
        mask.bits[p] = classify_pixel(mixtures_[p], x, channels_, params_) ? 1 : 0;
        update_pixel(mixtures_[p], x, channels_, alpha, params_);
    }
    return mask;
}

namespace {

// Union-find over provisional labels.
struct LabelForest {
    std::vector<std::int32_t> parent{0};  // label 0 reserved for background

    std::int32_t make() {
        parent.push_back(static_cast<std::int32_t>(parent.size()));
        return parent.back();
    }
    std::int32_t find(std::int32_t a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
    }
};

}  // namespace

Labeling connected_components(const BinaryMask& mask, int min_area) {
    Labeling out;
    out.width = mask.width;
    out.height = mask.height;
    out.labels.assign(mask.bits.size(), 0);

    LabelForest forest;
    // Pass 1: provisional labels from the already-scanned neighbors
    // (W, NW, N, NE under 8-connectivity).
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.get(x, y)) continue;
            const std::size_t idx = static_cast<std::size_t>(y) * mask.width + x;
            std::int32_t label = 0;
            const std::pair<int, int> prior[4] = {{x - 1, y}, {x - 1, y - 1}, {x, y - 1},
                                                  {x + 1, y - 1}};
            for (const auto& [nx, ny] : prior) {
                if (nx < 0 || nx >= mask.width || ny < 0 || ny >= mask.height) continue;
                const std::int32_t neighbor =
                    out.labels[static_cast<std::size_t>(ny) * mask.width + nx];
                if (neighbor == 0) continue;
                if (label == 0)
                    label = neighbor;
                else
                    forest.unite(label, neighbor);
            }
            if (label == 0) label = forest.make();
            out.labels[idx] = label;
        }
    }

    // Pass 2: resolve equivalences, compact labels in first-encounter order.
    std::vector<std::int32_t> compact(forest.parent.size(), 0);
    std::int32_t next = 0;
    for (std::int32_t& label : out.labels) {
        if (label == 0) continue;
        const std::int32_t root = forest.find(label);
        if (compact[static_cast<std::size_t>(root)] == 0)
            compact[static_cast<std::size_t>(root)] = ++next;
        label = compact[static_cast<std::size_t>(root)];
    }
    out.count = next;

    if (min_area > 0 && out.count > 0) {
        std::vector<std::int64_t> area(static_cast<std::size_t>(out.count) + 1, 0);
        for (std::int32_t label : out.labels) ++area[static_cast<std::size_t>(label)];
        std::vector<std::int32_t> remap(static_cast<std::size_t>(out.count) + 1, 0);
        std::int32_t kept = 0;
        for (std::int32_t l = 1; l <= out.count; ++l)
            if (area[static_cast<std::size_t>(l)] >= min_area)
                remap[static_cast<std::size_t>(l)] = ++kept;
        for (std::int32_t& label : out.labels) label = remap[static_cast<std::size_t>(label)];
        out.count = kept;
    }
    return out;
}

BinaryMask filter_small_components(const BinaryMask& mask, int min_area) {
    if (min_area <= 0) return mask;
    const Labeling labeling = connected_components(mask, min_area);
    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = labeling.labels[i] > 0 ? 1 : 0;
    return out;
}

}  // namespace cabinseg
