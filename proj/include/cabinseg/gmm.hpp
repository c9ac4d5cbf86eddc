#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cabinseg/image.hpp"

namespace cabinseg {

/// How the update rate rho of a matched component is derived from the
/// global learning rate alpha.
enum class RhoMode {
    AdaptiveWeight,  // rho = alpha / w_matched
    PaperDensity,    // rho = alpha * N(x | mu, var)
};

struct GmmParams {
    int history = 250;          // frames affecting the background model (T)
    double tau = 0.7;           // background portion threshold
    std::optional<double> alpha;  // fixed learning rate; empty = 1/min(t, T)
    double match_k = 2.5;       // std-deviation match multiplier
    int k_max = 5;              // max components per pixel
    double sigma0_sq = (15.0 / 255.0) * (15.0 / 255.0);  // initial variance
    double var_min = (4.0 / 255.0) * (4.0 / 255.0);
    double var_max = (75.0 / 255.0) * (75.0 / 255.0);
    double complexity_prior = 0.01;  // c_t, pushes idle weights negative
    RhoMode rho_mode = RhoMode::AdaptiveWeight;
    int min_area = 0;           // drop connected components below this size; 0 = off

    void validate() const;  // throws ConfigError
};

/// One Gaussian of a pixel mixture: weight, per-channel mean, shared
/// scalar variance. Weights may go negative transiently inside an
/// update; surviving components always have w > 0.
struct MixtureComponent {
    double w = 0.0;
    std::array<double, 3> mu = {0.0, 0.0, 0.0};
    double var = 0.0;
};

/// Components sorted descending by w/sigma after every update.
using PixelMixture = std::vector<MixtureComponent>;

/// Per-pixel value in [0,1] per channel.
using PixelValue = std::array<double, 3>;

/// True iff the squared distance to the mean is within
/// match_k^2 * variance (isotropic covariance).
bool match_component(const PixelValue& x, const MixtureComponent& c, int channels,
                     double match_k);

/// Online update of one pixel mixture with a new value.
void update_pixel(PixelMixture& mixture, const PixelValue& x, int channels, double alpha,
                  const GmmParams& params);

/// True = foreground. The first B components (smallest prefix whose
/// weight sum exceeds tau) model the background; a pixel is background
/// iff it matches one of them. Empty mixtures classify as foreground.
bool classify_pixel(const PixelMixture& mixture, const PixelValue& x, int channels,
                    const GmmParams& params);

/// Pixel-wise adaptive mixture background model. Frames must be fed in
/// temporal order by a single owner.
class BackgroundModel {
  public:
    BackgroundModel(int width, int height, int channels, GmmParams params);

    /// Classify every pixel against the current model, then fold the
    /// frame in. The mask reflects the model before this frame.
    BinaryMask process_frame(const ByteImage& frame);
    BinaryMask process_frame(const ScalarField& frame);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    int frames_seen() const { return frames_seen_; }
    const GmmParams& params() const { return params_; }
    const PixelMixture& mixture_at(int x, int y) const {
        return mixtures_[static_cast<std::size_t>(y) * width_ + x];
    }

  private:
    BinaryMask process_values(const std::vector<double>& values);

    int width_;
    int height_;
    int channels_;
    int frames_seen_ = 0;
    GmmParams params_;
    std::vector<PixelMixture> mixtures_;
};

/// Label grid from two-pass 8-connectivity labeling. Labels are 1..count
/// in first-encounter (row-major) order; 0 is background.
struct Labeling {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    int count = 0;
};

/// Two-pass connected components with union-find resolution. Components
/// smaller than min_area are zeroed and the survivors relabeled
/// compactly; min_area = 0 keeps everything.
Labeling connected_components(const BinaryMask& mask, int min_area = 0);

/// Mask with all components below min_area removed.
BinaryMask filter_small_components(const BinaryMask& mask, int min_area);

}  // namespace cabinseg
