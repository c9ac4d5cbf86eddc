#pragma once

// Straight-line per-pixel reference for the mixture background model.
// One pixel, one flat loop per frame: find the match, update weights,
// update the matched Gaussian, prune, replace, renormalize, sort. Kept
// deliberately separate from the library so the two paths can be
// compared bit for bit.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "cabinseg/gmm.hpp"

namespace cabinseg::testing {

struct RefComponent {
    double w;
    std::array<double, 3> mu;
    double var;
};

class RefPixelModel {
  public:
    explicit RefPixelModel(const GmmParams& params, int channels)
        : params_(params), channels_(channels) {}

    /// Classify against the current mixture (true = foreground), then
    /// fold the value in. Mirrors the classify-then-update frame order.
    bool observe(const std::array<double, 3>& x, double alpha) {
        const bool foreground = classify(x);
        update(x, alpha);
        return foreground;
    }

    bool classify(const std::array<double, 3>& x) const {
        if (comps_.empty()) return true;
        std::size_t b = 0;
        double cum = 0.0;
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            cum += comps_[i].w;
            ++b;
            if (cum > params_.tau) break;
        }
        for (std::size_t i = 0; i < b; ++i)
            if (matches(x, comps_[i])) return false;
        return true;
    }

    void update(const std::array<double, 3>& x, double alpha) {
        int matched = -1;
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            if (matches(x, comps_[i])) {
                matched = static_cast<int>(i);
                break;
            }
        }

        for (std::size_t i = 0; i < comps_.size(); ++i) {
            const double m = static_cast<int>(i) == matched ? 1.0 : 0.0;
            comps_[i].w = comps_[i].w + alpha * (m - comps_[i].w) -
                          alpha * params_.complexity_prior;
        }

        if (matched >= 0) {
            RefComponent& c = comps_[static_cast<std::size_t>(matched)];
            double rho;
            if (params_.rho_mode == RhoMode::AdaptiveWeight) {
                rho = alpha / c.w;
            } else {
                const double d2 = dist2(x, c);
                const double norm =
                    std::pow(2.0 * 3.14159265358979323846 * c.var, -0.5 * channels_);
                rho = alpha * norm * std::exp(-d2 / (2.0 * c.var));
            }
            rho = std::min(rho, 1.0);
            for (int ch = 0; ch < channels_; ++ch) {
                const std::size_t s = static_cast<std::size_t>(ch);
                c.mu[s] = (1.0 - rho) * c.mu[s] + rho * x[s];
            }
            const double d2_new = dist2(x, c);
            c.var = (1.0 - rho) * c.var + rho * d2_new;
            c.var = std::clamp(c.var, params_.var_min, params_.var_max);
        }

        comps_.erase(std::remove_if(comps_.begin(), comps_.end(),
                                    [](const RefComponent& c) { return c.w <= 0.0; }),
                     comps_.end());

        if (matched < 0) {
            RefComponent fresh{alpha, x, params_.sigma0_sq};
            if (static_cast<int>(comps_.size()) < params_.k_max)
                comps_.push_back(fresh);
            else
                comps_.back() = fresh;
        }

        double sum = 0.0;
        for (const RefComponent& c : comps_) sum += c.w;
        for (RefComponent& c : comps_) c.w /= sum;

        std::stable_sort(comps_.begin(), comps_.end(),
                         [](const RefComponent& a, const RefComponent& b) {
                             return a.w / std::sqrt(a.var) > b.w / std::sqrt(b.var);
                         });
    }

    const std::vector<RefComponent>& components() const { return comps_; }

  private:
    double dist2(const std::array<double, 3>& x, const RefComponent& c) const {
        double d2 = 0.0;
        for (int ch = 0; ch < channels_; ++ch) {
            const std::size_t s = static_cast<std::size_t>(ch);
            const double d = x[s] - c.mu[s];
            d2 += d * d;
        }
        return d2;
    }

    bool matches(const std::array<double, 3>& x, const RefComponent& c) const {
        return dist2(x, c) <= params_.match_k * params_.match_k * c.var;
    }

    GmmParams params_;
    int channels_;
    std::vector<RefComponent> comps_;
};

/// Run the reference model over a whole byte sequence and return one
/// foreground mask per frame.
inline std::vector<BinaryMask> ref_process_sequence(const std::vector<ByteImage>& frames,
                                                    const GmmParams& params) {
    const int w = frames.front().width, h = frames.front().height;
    const int channels = frames.front().channels;
    std::vector<RefPixelModel> pixels(static_cast<std::size_t>(w) * h,
                                      RefPixelModel(params, channels));
    std::vector<BinaryMask> masks;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const double alpha =
            params.alpha ? *params.alpha
                         : 1.0 / std::min(static_cast<int>(t) + 1, params.history);
        BinaryMask mask(w, h);
        for (std::size_t p = 0; p < pixels.size(); ++p) {
            std::array<double, 3> x = {0.0, 0.0, 0.0};
            for (int ch = 0; ch < channels; ++ch)
                x[static_cast<std::size_t>(ch)] =
                    frames[t].samples[p * static_cast<std::size_t>(channels) +
                                      static_cast<std::size_t>(ch)] /
                    255.0;
            mask.bits[p] = pixels[p].observe(x, alpha) ? 1 : 0;
        }
        masks.push_back(std::move(mask));
    }
    return masks;
}

}  // namespace cabinseg::testing
