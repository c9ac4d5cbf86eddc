#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "cabinseg/image.hpp"

namespace cabinseg {

/// Offset set probing a binary grid. The scale h multiplies every
/// offset (hB). Reads outside the grid are background.
struct StructuringElement {
    std::vector<std::pair<int, int>> offsets;  // (dx, dy)
    int scale = 1;

    static StructuringElement square3();
    static StructuringElement square5();
    static StructuringElement cross3();
    static StructuringElement from_offsets(std::vector<std::pair<int, int>> offsets, int scale = 1);
    /// Parse "square3", "square5", "cross3".
    static StructuringElement from_name(const std::string& name);

    /// Largest |offset| * scale in either axis.
    int reach() const;
};

/// The four 3-pixel discrete line segments through the origin:
/// horizontal, vertical, and both diagonals.
struct LineSegmentFamily {
    std::array<std::array<std::pair<int, int>, 3>, 4> segments;

    static LineSegmentFamily standard();
};

BinaryMask dilate(const BinaryMask& u, const StructuringElement& element);
BinaryMask erode(const BinaryMask& u, const StructuringElement& element);

/// Erosion then dilation; removes isolated specks.
BinaryMask opening(const BinaryMask& u, const StructuringElement& element);
/// Dilation then erosion; fills small holes.
BinaryMask closing(const BinaryMask& u, const StructuringElement& element);

/// out(x) = max over segments of (min over the segment at x).
BinaryMask sup_inf(const BinaryMask& u, const LineSegmentFamily& family, int h);
/// out(x) = min over segments of (max over the segment at x).
BinaryMask inf_sup(const BinaryMask& u, const LineSegmentFamily& family, int h);

/// The composed operator is not self-dual; callers alternate phases
/// across successive smoothing steps to cancel the shrink/grow bias.
enum class CurvaturePhase {
    SupInfOfInfSup,  // sup_inf(inf_sup(u))
    InfSupOfSupInf,  // inf_sup(sup_inf(u))
};

/// One curvature smoothing step over the standard segment family (h=1).
BinaryMask curvature_op(const BinaryMask& u, CurvaturePhase phase);

}  // namespace cabinseg
