#include "cabinseg/snakes.hpp"

#include <algorithm>
#include <cmath>

namespace cabinseg {

void MacweParams::validate() const {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw ConfigError("macwe lambda weights must be positive");
    if (iterations < 0) throw ConfigError("macwe iterations must be >= 0");
    if (smoothing < 1 || smoothing > 4) throw ConfigError("macwe smoothing must be in 1..4");
}

void MgacParams::validate() const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("mgac tau must be in [0,1]");
    if (iterations < 0) throw ConfigError("mgac iterations must be >= 0");
    if (smoothing < 1 || smoothing > 4) throw ConfigError("mgac smoothing must be in 1..4");
}

void GimageParams::validate() const {
    if (!(sigma > 0.0)) throw ConfigError("gimage sigma must be positive");
    if (!(alpha_scale > 0.0)) throw ConfigError("gimage alpha_scale must be positive");
}

namespace {

int reflect_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

CurvaturePhase phase_for(int counter) {
    return counter % 2 == 0 ? CurvaturePhase::SupInfOfInfSup : CurvaturePhase::InfSupOfSupInf;
}

void smooth(BinaryMask& u, int steps, int& counter) {
    for (int k = 0; k < steps; ++k) {
        u = curvature_op(u, phase_for(counter));
        ++counter;
    }
}

bool all_same(const BinaryMask& u) {
    const std::size_t on = u.count_true();
    return on == 0 || on == u.bits.size();
}

}  // namespace

VectorField gradient(const ScalarField& field) {
    const int w = field.width, h = field.height;
    VectorField out{ScalarField(w, h, 0.0, field.range), ScalarField(w, h, 0.0, field.range)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double gx, gy;
            if (w == 1)
                gx = 0.0;
            else if (x == 0)
                gx = field.at(1, y) - field.at(0, y);
            else if (x == w - 1)
                gx = field.at(w - 1, y) - field.at(w - 2, y);
            else
                gx = (field.at(x + 1, y) - field.at(x - 1, y)) / 2.0;
            if (h == 1)
                gy = 0.0;
            else if (y == 0)
                gy = field.at(x, 1) - field.at(x, 0);
            else if (y == h - 1)
                gy = field.at(x, h - 1) - field.at(x, h - 2);
            else
                gy = (field.at(x, y + 1) - field.at(x, y - 1)) / 2.0;
            out.dx.at(x, y) = gx;
            out.dy.at(x, y) = gy;
        }
    }
    return out;
}

ScalarField gaussian_blur(const ScalarField& field, double sigma) {
    const int radius = static_cast<int>(4.0 * sigma + 0.5);
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += kernel[static_cast<std::size_t>(i + radius)];
    }
    for (double& k : kernel) k /= sum;

    const int w = field.width, h = field.height;
    ScalarField tmp(w, h, 0.0, field.range);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       field.at(reflect_index(x + i, w), y);
            tmp.at(x, y) = acc;
        }
    }
    ScalarField out(w, h, 0.0, field.range);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       tmp.at(x, reflect_index(y + i, h));
            out.at(x, y) = acc;
        }
    }
    return out;
}

LevelSet init_levelset(const ContourInit& init, int width, int height) {
    if (init.circles.empty()) throw ConfigError("contour init needs at least one circle");
    for (const Circle& c : init.circles) {
        if (c.cx < 0.0 || c.cx >= width || c.cy < 0.0 || c.cy >= height)
            throw ConfigError("contour circle center lies outside the image");
        if (c.radius < 0.0) throw ConfigError("contour circle radius must be >= 0");
    }
    LevelSet ls{BinaryMask(width, height)};
    for (const Circle& c : init.circles) {
        const int x0 = std::max(0, static_cast<int>(std::floor(c.cx - c.radius)));
        const int x1 = std::min(width - 1, static_cast<int>(std::ceil(c.cx + c.radius)));
        const int y0 = std::max(0, static_cast<int>(std::floor(c.cy - c.radius)));
        const int y1 = std::min(height - 1, static_cast<int>(std::ceil(c.cy + c.radius)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - c.cx, dy = y - c.cy;
                if (dx * dx + dy * dy <= c.radius * c.radius) ls.u.set(x, y, true);
            }
    }
    return ls;
}

ScalarField inverse_gaussian_gradient(const ScalarField& img, const GimageParams& params) {
    params.validate();
    const ScalarField blurred = gaussian_blur(img, params.sigma);
    const VectorField grad = gradient(blurred);
    ScalarField g(img.width, img.height, 0.0, {0.0, 1.0});
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double gx = grad.dx.values[i], gy = grad.dy.values[i];
        const double mag = std::sqrt(gx * gx + gy * gy);
        g.values[i] = 1.0 / std::sqrt(1.0 + params.alpha_scale * mag);
    }
    return g;
}

LevelSet macwe_step(const LevelSet& ls, const ScalarField& img, const MacweParams& params,
                    int& smooth_counter) {
    require_same_size(ls.u.width, ls.u.height, img.width, img.height, "macwe");
    const std::size_t inside = ls.u.count_true();
    if (inside == 0 || inside == ls.u.bits.size())
        throw DegenerateRegion("level set covers nothing or everything");

    double sum_in = 0.0, sum_out = 0.0;
    for (std::size_t i = 0; i < img.values.size(); ++i)
        (ls.u.bits[i] ? sum_in : sum_out) += img.values[i];
    const double c1 = sum_in / static_cast<double>(inside);
    const double c2 = sum_out / static_cast<double>(img.values.size() - inside);

    // Attachment acts on the contour band, where the discrete gradient
    // of u is nonzero. Equality between the two attraction terms leaves
    // the pixel unchanged.
    ScalarField uf(ls.u.width, ls.u.height);
    for (std::size_t i = 0; i < uf.values.size(); ++i) uf.values[i] = ls.u.bits[i];
    const VectorField du = gradient(uf);

    BinaryMask next = ls.u;
    for (std::size_t i = 0; i < next.bits.size(); ++i) {
        if (du.dx.values[i] == 0.0 && du.dy.values[i] == 0.0) continue;
        const double din = img.values[i] - c1;
        const double dout = img.values[i] - c2;
        const double inside_term = params.lambda1 * din * din;
        const double outside_term = params.lambda2 * dout * dout;
        if (inside_term < outside_term)
            next.bits[i] = 1;
        else if (inside_term > outside_term)
            next.bits[i] = 0;
    }

    smooth(next, params.smoothing, smooth_counter);
    return LevelSet{std::move(next)};
}

LevelSet mgac_step(const LevelSet& ls, const ScalarField& g, const VectorField& grad_g,
                   const MgacParams& params, int iteration, int& smooth_counter) {
    require_same_size(ls.u.width, ls.u.height, g.width, g.height, "mgac");
    BinaryMask next = ls.u;

    if (params.balloon != 0.0) {
        const double v = std::fabs(params.balloon);
        const double gate =
            params.gate_mode == BalloonGateMode::TauOverV ? params.tau / v : params.tau;
        int sub_steps = static_cast<int>(std::floor(v));
        const double frac = v - sub_steps;
        if (frac > 1e-12) {
            // epsilon keeps e.g. |v| = 1.2 on a 5-iteration period despite
            // the fraction materializing as 0.19999999999999996
            const int period = static_cast<int>(std::ceil(1.0 / frac - 1e-9));
            if (iteration % period == 0) ++sub_steps;
        }
        const StructuringElement ball = StructuringElement::square3();
        for (int s = 0; s < sub_steps; ++s) {
            const BinaryMask aux =
                params.balloon > 0.0 ? dilate(next, ball) : erode(next, ball);
            for (std::size_t i = 0; i < next.bits.size(); ++i)
                if (g.values[i] > gate) next.bits[i] = aux.bits[i];
        }
    }

    // Attraction: the sign of grad(g) . grad(u) pulls the contour into
    // the valleys of g.
    ScalarField uf(next.width, next.height);
    for (std::size_t i = 0; i < uf.values.size(); ++i) uf.values[i] = next.bits[i];
    const VectorField du = gradient(uf);
    for (std::size_t i = 0; i < next.bits.size(); ++i) {
        const double dot =
            grad_g.dx.values[i] * du.dx.values[i] + grad_g.dy.values[i] * du.dy.values[i];
        if (dot > 0.0)
            next.bits[i] = 1;
        else if (dot < 0.0)
            next.bits[i] = 0;
    }

    smooth(next, params.smoothing, smooth_counter);
    return LevelSet{std::move(next)};
}

SnakeResult run_macwe(const ScalarField& img, const ContourInit& init,
                      const MacweParams& params) {
    params.validate();
    LevelSet ls = init_levelset(init, img.width, img.height);
    SnakeResult result;
    int counter = 0;
    int unchanged = 0;
    for (int it = 1; it <= params.iterations; ++it) {
        LevelSet next;
        try {
            next = macwe_step(ls, img, params, counter);
        } catch (const DegenerateRegion&) {
            result.degenerate = true;
            break;
        }
        unchanged = next.u == ls.u ? unchanged + 1 : 0;
        ls = std::move(next);
        result.iterations_run = it;
        if (unchanged >= 2) break;
    }
    result.degenerate = result.degenerate || all_same(ls.u);
    result.mask = std::move(ls.u);
    return result;
}

SnakeResult run_mgac(const ScalarField& img, const ContourInit& init, const MgacParams& params,
                     const GimageParams& gparams) {
    params.validate();
    const ScalarField g = inverse_gaussian_gradient(img, gparams);
    const VectorField grad_g = gradient(g);
    LevelSet ls = init_levelset(init, img.width, img.height);
    SnakeResult result;
    int counter = 0;
    int unchanged = 0;
    for (int it = 1; it <= params.iterations; ++it) {
        LevelSet next = mgac_step(ls, g, grad_g, params, it, counter);
        unchanged = next.u == ls.u ? unchanged + 1 : 0;
        ls = std::move(next);
        result.iterations_run = it;
        if (unchanged >= 2) break;
    }
    result.degenerate = all_same(ls.u);
    result.mask = std::move(ls.u);
    return result;
}

}  // namespace cabinseg
