#include "cabinseg/morphology.hpp"

#include <algorithm>
#include <cstdlib>

namespace cabinseg {

StructuringElement StructuringElement::square3() {
    StructuringElement e;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) e.offsets.emplace_back(dx, dy);
    return e;
}

StructuringElement StructuringElement::square5() {
    StructuringElement e;
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) e.offsets.emplace_back(dx, dy);
    return e;
}

StructuringElement StructuringElement::cross3() {
    StructuringElement e;
    e.offsets = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    return e;
}

StructuringElement StructuringElement::from_offsets(std::vector<std::pair<int, int>> offsets,
                                                    int scale) {
    if (offsets.empty()) throw ConfigError("structuring element must be non-empty");
    if (scale < 1) throw ConfigError("structuring element scale must be >= 1");
    StructuringElement e;
    e.offsets = std::move(offsets);
    e.scale = scale;
    return e;
}

StructuringElement StructuringElement::from_name(const std::string& name) {
    if (name == "square3") return square3();
    if (name == "square5") return square5();
    if (name == "cross3") return cross3();
    throw ConfigError("unknown structuring element: " + name);
}

int StructuringElement::reach() const {
    int r = 0;
    for (const auto& [dx, dy] : offsets) r = std::max({r, std::abs(dx), std::abs(dy)});
    return r * scale;
}

LineSegmentFamily LineSegmentFamily::standard() {
    LineSegmentFamily f;
    f.segments = {{
        {{{-1, 0}, {0, 0}, {1, 0}}},    // horizontal
        {{{0, -1}, {0, 0}, {0, 1}}},    // vertical
        {{{-1, -1}, {0, 0}, {1, 1}}},   // main diagonal
        {{{-1, 1}, {0, 0}, {1, -1}}},   // anti diagonal
    }};
    return f;
}

BinaryMask dilate(const BinaryMask& u, const StructuringElement& element) {
    BinaryMask out(u.width, u.height);
    const int h = element.scale;
    for (int y = 0; y < u.height; ++y) {
        for (int x = 0; x < u.width; ++x) {
            bool hit = false;
            for (const auto& [dx, dy] : element.offsets) {
                if (u.get_clamped(x - h * dx, y - h * dy)) {
                    hit = true;
                    break;
                }
            }
            out.set(x, y, hit);
        }
    }
    return out;
}

BinaryMask erode(const BinaryMask& u, const StructuringElement& element) {
    BinaryMask out(u.width, u.height);
    const int h = element.scale;
    for (int y = 0; y < u.height; ++y) {
        for (int x = 0; x < u.width; ++x) {
            // min over y' in -hB of u(x - y') reads u(x + h*offset)
            bool all = true;
            for (const auto& [dx, dy] : element.offsets) {
                if (!u.get_clamped(x + h * dx, y + h * dy)) {
                    all = false;
                    break;
                }
            }
            out.set(x, y, all);
        }
    }
    return out;
}

BinaryMask opening(const BinaryMask& u, const StructuringElement& element) {
    return dilate(erode(u, element), element);
}

// The segment sweeps below clip at the grid border (out-of-grid offsets
// are skipped) so constant masks are exact fixed points and the
// sup-inf/inf-sup pair stays complement-dual on the whole grid.

BinaryMask closing(const BinaryMask& u, const StructuringElement& element) {
    return erode(dilate(u, element), element);
}

BinaryMask sup_inf(const BinaryMask& u, const LineSegmentFamily& family, int h) {
    BinaryMask out(u.width, u.height);
    for (int y = 0; y < u.height; ++y) {
        for (int x = 0; x < u.width; ++x) {
            bool any_segment = false;
            for (const auto& segment : family.segments) {
                bool all = true;
                for (const auto& [dx, dy] : segment) {
                    const int nx = x + h * dx, ny = y + h * dy;
                    if (nx < 0 || nx >= u.width || ny < 0 || ny >= u.height) continue;
                    if (!u.get(nx, ny)) {
                        all = false;
                        break;
                    }
                }
                if (all) {
                    any_segment = true;
                    break;
                }
            }
            out.set(x, y, any_segment);
        }
    }
    return out;
}

BinaryMask inf_sup(const BinaryMask& u, const LineSegmentFamily& family, int h) {
    BinaryMask out(u.width, u.height);
    for (int y = 0; y < u.height; ++y) {
        for (int x = 0; x < u.width; ++x) {
            bool every_segment = true;
            for (const auto& segment : family.segments) {
                bool any = false;
                for (const auto& [dx, dy] : segment) {
                    const int nx = x + h * dx, ny = y + h * dy;
                    if (nx < 0 || nx >= u.width || ny < 0 || ny >= u.height) continue;
                    if (u.get(nx, ny)) {
                        any = true;
                        break;
                    }
                }
                if (!any) {
                    every_segment = false;
                    break;
                }
            }
            out.set(x, y, every_segment);
        }
    }
    return out;
}

BinaryMask curvature_op(const BinaryMask& u, CurvaturePhase phase) {
    const LineSegmentFamily family = LineSegmentFamily::standard();
    if (phase == CurvaturePhase::SupInfOfInfSup)
        return sup_inf(inf_sup(u, family, 1), family, 1);
    return inf_sup(sup_inf(u, family, 1), family, 1);
}

}  // namespace cabinseg
