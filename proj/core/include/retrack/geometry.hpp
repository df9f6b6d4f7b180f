#pragma once

#include <array>
#include <vector>

#include "retrack/config.hpp"
#include "retrack/types.hpp"

namespace retrack {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// BEV footprint of a box: 4 corners, counter-clockwise.
using BevPolygon = std::array<Vec2, 4>;

/// Corners of the (x, y, w, l, theta) rectangle. Order starts at the
/// front-left corner (+l/2, +w/2 in the box frame) and runs counter-clockwise.
BevPolygon bev_polygon(const BoxState& b);

/// Shoelace area of a simple polygon (positive for counter-clockwise).
double polygon_area(const std::vector<Vec2>& poly);

/// Clips `subject` against the convex polygon `clip` (Sutherland-Hodgman).
/// Both must be counter-clockwise.
std::vector<Vec2> clip_convex(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip);

/// Convex hull via monotone chain, counter-clockwise without repeated endpoint.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// BEV intersection area of two boxes.
double bev_intersection_area(const BoxState& a, const BoxState& b);

/// Intersection over union of the BEV rectangles, in [0, 1].
/// Degenerate (zero-area) boxes yield 0 unless the boxes are identical.
double bev_iou(const BoxState& a, const BoxState& b);

/// Volumetric intersection over union, in [0, 1].
double iou_3d(const BoxState& a, const BoxState& b);

/// Generalized 3D IoU in (-1, 1]; hull = BEV convex hull of both boxes
/// times the joint z-extent.
double giou_3d(const BoxState& a, const BoxState& b);

/// Association cost 1 - metric(a, b). Pairs of different categories cost
/// +infinity regardless of geometry.
double cost(const BoxState& a, const BoxState& b, Metric metric);

}  // namespace retrack
