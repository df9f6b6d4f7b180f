#include "retrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace retrack {

namespace {

constexpr double kAreaEps = 1e-12;

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double z_overlap(const BoxState& a, const BoxState& b) {
    return std::max(0.0, std::min(a.z_top(), b.z_top()) - std::max(a.z_bottom(), b.z_bottom()));
}

}  // namespace

BevPolygon bev_polygon(const BoxState& b) {
    const double c = std::cos(b.theta);
    const double s = std::sin(b.theta);
    const double hl = 0.5 * b.l;
    const double hw = 0.5 * b.w;
    // (+hl,+hw), (-hl,+hw), (-hl,-hw), (+hl,-hw) in the box frame is CCW.
    const std::array<Vec2, 4> local{{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
    BevPolygon out;
    for (int i = 0; i < 4; ++i) {
        out[i].x = b.x + c * local[i].x - s * local[i].y;
        out[i].y = b.y + s * local[i].x + c * local[i].y;
    }
    return out;
}

double polygon_area(const std::vector<Vec2>& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * acc;
}

std::vector<Vec2> clip_convex(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip) {
    std::vector<Vec2> output = subject;
    const std::size_t m = clip.size();
    for (std::size_t e = 0; e < m && !output.empty(); ++e) {
        const Vec2& a = clip[e];
        const Vec2& b = clip[(e + 1) % m];
        std::vector<Vec2> input;
        input.swap(output);
        const std::size_t n = input.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& cur = input[i];
            const Vec2& nxt = input[(i + 1) % n];
            const double dc = cross(a, b, cur);
            const double dn = cross(a, b, nxt);
            if (dc >= 0.0) output.push_back(cur);
            if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
                const double t = dc / (dc - dn);
                output.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
            }
        }
    }
    return output;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
    std::sort(points.begin(), points.end(), [](const Vec2& p, const Vec2& q) {
        return p.x < q.x || (p.x == q.x && p.y < q.y);
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const Vec2& p, const Vec2& q) { return p.x == q.x && p.y == q.y; }),
                 points.end());
    const std::size_t n = points.size();
    if (n < 3) return points;
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

double bev_intersection_area(const BoxState& a, const BoxState& b) {
    const BevPolygon pa = bev_polygon(a);
    const BevPolygon pb = bev_polygon(b);
    const std::vector<Vec2> inter = clip_convex({pa.begin(), pa.end()}, {pb.begin(), pb.end()});
    return std::max(0.0, polygon_area(inter));
}

double bev_iou(const BoxState& a, const BoxState& b) {
    const double area_a = a.w * a.l;
    const double area_b = b.w * b.l;
    if (area_a <= kAreaEps || area_b <= kAreaEps)
        return a.same_pose_and_size(b) ? 1.0 : 0.0;
    const double inter = bev_intersection_area(a, b);
    const double uni = area_a + area_b - inter;
    if (uni <= kAreaEps) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_3d(const BoxState& a, const BoxState& b) {
    const double vol_a = a.w * a.l * a.h;
    const double vol_b = b.w * b.l * b.h;
    if (vol_a <= kAreaEps || vol_b <= kAreaEps)
        return a.same_pose_and_size(b) ? 1.0 : 0.0;
    const double inter = bev_intersection_area(a, b) * z_overlap(a, b);
    const double uni = vol_a + vol_b - inter;
    if (uni <= kAreaEps) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double giou_3d(const BoxState& a, const BoxState& b) {
    const double vol_a = a.w * a.l * a.h;
    const double vol_b = b.w * b.l * b.h;
    if (vol_a <= kAreaEps || vol_b <= kAreaEps)
        return a.same_pose_and_size(b) ? 1.0 : 0.0;
    const double inter = bev_intersection_area(a, b) * z_overlap(a, b);
    const double uni = vol_a + vol_b - inter;
    const BevPolygon pa = bev_polygon(a);
    const BevPolygon pb = bev_polygon(b);
    std::vector<Vec2> pts(pa.begin(), pa.end());
    pts.insert(pts.end(), pb.begin(), pb.end());
    const double hull_area = polygon_area(convex_hull(std::move(pts)));
    const double joint_z =
        std::max(a.z_top(), b.z_top()) - std::min(a.z_bottom(), b.z_bottom());
    const double hull_vol = hull_area * joint_z;
    if (hull_vol <= kAreaEps) return uni <= kAreaEps ? 0.0 : inter / uni;
    return inter / uni - (hull_vol - uni) / hull_vol;
}

double cost(const BoxState& a, const BoxState& b, Metric metric) {
    if (a.cls != b.cls) return std::numeric_limits<double>::infinity();
    switch (metric) {
        case Metric::IouBev: return 1.0 - bev_iou(a, b);
        case Metric::Iou3d: return 1.0 - iou_3d(a, b);
        case Metric::GIou3d: return 1.0 - giou_3d(a, b);
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace retrack
