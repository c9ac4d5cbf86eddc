#pragma once

#include <vector>

#include "cabinseg/image.hpp"
#include "cabinseg/morphology.hpp"

namespace cabinseg {

/// Binary embedding of the evolving contour (true = inside).
struct LevelSet {
    BinaryMask u;
};

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

/// Initial contour(s); centers must lie inside the image.
struct ContourInit {
    std::vector<Circle> circles;
};

struct MacweParams {
    double lambda1 = 1.0;  // penalty on deviation from the inside mean c1
    double lambda2 = 1.0;  // penalty on deviation from the outside mean c2
    int iterations = 100;
    int smoothing = 2;  // curvature applications per step, in {1,2,3,4}

    void validate() const;
};

enum class BalloonGateMode {
    TauOverV,  // balloon acts where g > tau / |v|
    Tau,       // balloon acts where g > tau
};

struct MgacParams {
    double balloon = 1.2;  // v; > 0 inflates, < 0 deflates, 0 off
    double tau = 0.3;      // stopping threshold in [0,1]
    int iterations = 100;
    int smoothing = 2;
    BalloonGateMode gate_mode = BalloonGateMode::TauOverV;

    void validate() const;
};

/// Parameters of the edge-indicator filter g.
struct GimageParams {
    double sigma = 3.0;         // Gaussian blur std-dev in pixels
    double alpha_scale = 1000.0;  // steepness of the gradient response

    void validate() const;
};

/// Per-axis central-difference derivatives (one-sided at the borders).
struct VectorField {
    ScalarField dx;
    ScalarField dy;
};
VectorField gradient(const ScalarField& field);

/// Separable Gaussian blur with reflected borders.
ScalarField gaussian_blur(const ScalarField& field, double sigma);

/// Union of the filled circles as a level set.
LevelSet init_levelset(const ContourInit& init, int width, int height);

/// Edge indicator g = 1/sqrt(1 + alpha * |grad(G_sigma * img)|).
/// Close to 0 on strong blurred edges, exactly 1 on constant images.
ScalarField inverse_gaussian_gradient(const ScalarField& img, const GimageParams& params);

/// One evolution step: region means, sign-test attachment on the
/// contour band, then `smoothing` curvature applications. The counter
/// alternates the curvature phase and advances by `smoothing`.
/// Throws DegenerateRegion when u is all-true or all-false.
LevelSet macwe_step(const LevelSet& u, const ScalarField& img, const MacweParams& params,
                    int& smooth_counter);

/// One evolution step: gated balloon dilation/erosion, attraction by
/// sign of grad(g)*grad(u), then curvature smoothing. `iteration` is
/// 1-based and schedules the fractional balloon sub-step.
LevelSet mgac_step(const LevelSet& u, const ScalarField& g, const VectorField& grad_g,
                   const MgacParams& params, int iteration, int& smooth_counter);

struct SnakeResult {
    BinaryMask mask;
    int iterations_run = 0;
    bool degenerate = false;  // region collapsed to all-true or all-false
};

/// Full MACWE evolution; stops early once the mask is unchanged for two
/// consecutive iterations.
SnakeResult run_macwe(const ScalarField& img, const ContourInit& init, const MacweParams& params);

/// Full MGAC evolution; g is computed once from the image.
SnakeResult run_mgac(const ScalarField& img, const ContourInit& init, const MgacParams& params,
                     const GimageParams& gparams);

}  // namespace cabinseg
