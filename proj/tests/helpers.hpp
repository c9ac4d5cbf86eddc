#pragma once

#include <vector>

#include "cabinseg/image.hpp"
#include "cabinseg/rng.hpp"

namespace cabinseg::testing {

/// Uniform random mask with the given foreground density.
inline BinaryMask random_mask(Rng& rng, int w, int h, double density = 0.5) {
    BinaryMask m(w, h);
    for (auto& b : m.bits) b = rng.next_double() < density ? 1 : 0;
    return m;
}

/// Random mask whose outermost `border` rows/columns are background.
inline BinaryMask random_mask_with_border(Rng& rng, int w, int h, int border,
                                          double density = 0.5) {
    BinaryMask m(w, h);
    for (int y = border; y < h - border; ++y)
        for (int x = border; x < w - border; ++x)
            m.set(x, y, rng.next_double() < density);
    return m;
}

/// Blobby mask: iid noise box-blurred and thresholded at its median.
/// Produces organic shapes closer to real segmentation output than
/// pixel noise.
inline BinaryMask random_blob_mask(Rng& rng, int w, int h, int radius = 2) {
    std::vector<double> noise(static_cast<std::size_t>(w) * h);
    for (double& v : noise) v = rng.next_double();
    std::vector<double> smooth(noise.size(), 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            int n = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || xx >= w || yy < 0 || yy >= h) continue;
                    sum += noise[static_cast<std::size_t>(yy) * w + xx];
                    ++n;
                }
            smooth[static_cast<std::size_t>(y) * w + x] = sum / n;
        }
    std::vector<double> sorted = smooth;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    BinaryMask m(w, h);
    for (std::size_t i = 0; i < smooth.size(); ++i) m.bits[i] = smooth[i] > median ? 1 : 0;
    return m;
}

/// Union of a few random filled disks; the shape population contour
/// evolution actually operates on.
inline BinaryMask random_disk_union_mask(Rng& rng, int w, int h) {
    BinaryMask m(w, h);
    const int disks = 1 + static_cast<int>(rng.next_below(3));
    for (int k = 0; k < disks; ++k) {
        const double cx = 6 + rng.next_double() * (w - 12);
        const double cy = 6 + rng.next_double() * (h - 12);
        const double r = 3 + rng.next_double() * 7;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.set(x, y, true);
    }
    return m;
}

/// Random field with values in [0,1].
inline ScalarField random_field(Rng& rng, int w, int h) {
    ScalarField f(w, h, 0.0, {0.0, 1.0});
    for (double& v : f.values) v = rng.next_double();
    return f;
}

/// Filled rectangle mask.
inline BinaryMask rect_mask(int w, int h, int x0, int y0, int rw, int rh) {
    BinaryMask m(w, h);
    for (int y = y0; y < y0 + rh; ++y)
        for (int x = x0; x < x0 + rw; ++x) m.set(x, y, true);
    return m;
}

/// Filled disk mask centered at (cx, cy).
inline BinaryMask disk_mask(int w, int h, int cx, int cy, int r) {
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.set(x, y, true);
    return m;
}

}  // namespace cabinseg::testing
