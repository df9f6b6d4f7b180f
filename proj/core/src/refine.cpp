#include "retrack/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "retrack/geometry.hpp"
#include "retrack/lm.hpp"
#include "retrack/motion.hpp"

namespace retrack {

namespace {

// Corner offsets in the box frame, matching the bev_polygon corner order.
std::array<Vec2, 4> local_corners(double w, double l) {
    const double hl = 0.5 * l;
    const double hw = 0.5 * w;
    return {{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
}

}  // namespace

Size3 refine_size_topk(const Tracklet& trk, int k) {
    if (trk.empty()) throw ArgumentError("refine_size_topk: empty tracklet");
    if (k < 1) throw ArgumentError("refine_size_topk: k must be >= 1");

    // Rank observed states by confidence; fall back to all states when the
    // tracklet is fully interpolated.
    std::vector<const BoxState*> ranked;
    for (const auto& s : trk.states)
        if (!s.interpolated) ranked.push_back(&s);
    if (ranked.empty())
        for (const auto& s : trk.states) ranked.push_back(&s);
    std::stable_sort(ranked.begin(), ranked.end(), [](const BoxState* a, const BoxState* b) {
        return a->conf > b->conf;
    });
    if (static_cast<int>(ranked.size()) > k) ranked.resize(k);

    double max_conf = ranked.front()->conf;
    for (const BoxState* s : ranked) max_conf = std::max(max_conf, s->conf);
    double wsum = 0.0;
    Size3 size;
    for (const BoxState* s : ranked) {
        const double w = std::exp(s->conf - max_conf);
        size.w += w * s->w;
        size.l += w * s->l;
        size.h += w * s->h;
        wsum += w;
    }
    size.w /= wsum;
    size.l /= wsum;
    size.h /= wsum;
    return size;
}

Tracklet apply_size_centered(Tracklet trk, const Size3& size) {
    for (auto& s : trk.states) {
        s.w = size.w;
        s.l = size.l;
        s.h = size.h;
    }
    return trk;
}

Tracklet corner_align(const Tracklet& trk, const std::vector<EgoPose>& ego,
                      const Size3& new_size) {
    if (ego.empty()) return apply_size_centered(trk, new_size);

    Tracklet out = trk;
    for (auto& s : out.states) {
        if (s.frame < 0 || s.frame >= static_cast<int>(ego.size()))
            throw ArgumentError("corner_align: no ego position for frame " +
                                std::to_string(s.frame));
        const EgoPose& e = ego[s.frame];
        const BevPolygon corners = bev_polygon(s);
        int anchor = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4; ++i) {
            const double d = std::hypot(corners[i].x - e.x, corners[i].y - e.y);
            if (d < best) {
                best = d;
                anchor = i;
            }
        }
        // Recompute the center so the anchor corner of the resized box lands
        // exactly on the anchor corner of the original box.
        const auto offs = local_corners(new_size.w, new_size.l);
        const double c = std::cos(s.theta);
        const double sn = std::sin(s.theta);
        s.x = corners[anchor].x - (c * offs[anchor].x - sn * offs[anchor].y);
        s.y = corners[anchor].y - (sn * offs[anchor].x + c * offs[anchor].y);
        s.z = s.z_bottom() + 0.5 * new_size.h;
        s.w = new_size.w;
        s.l = new_size.l;
        s.h = new_size.h;
    }
    return out;
}

Tracklet global_refine(const Tracklet& trk, const std::vector<EgoPose>& ego,
                       const PipelineConfig& cfg) {
    const CategoryParams& p = cfg.params_for(trk.cls);
    if (!p.rigid || trk.empty()) return trk;
    const Size3 size = refine_size_topk(trk, p.topk);
    if (cfg.enable_corner_align) return corner_align(trk, ego, size);
    return apply_size_centered(trk, size);
}

Tracklet sliding_window_refine(const Tracklet& trk, const PipelineConfig& ccfg,
                               const SceneContext& ctx,
                               std::vector<RefineWarningEvent>* warnings) {
    const CategoryParams& p = ccfg.params_for(trk.cls);
    if (p.window_halfspan > 4.0)
        throw ArgumentError("sliding_window_refine: window_halfspan exceeds 4 s");
    const int half = std::max(1, static_cast<int>(std::lround(p.window_halfspan * ctx.frame_rate)));
    const RefineWeights& rw = ccfg.refine_weights;

    Tracklet out = trk;
    for (std::size_t idx = 0; idx < trk.states.size(); ++idx) {
        const BoxState& center = trk.states[idx];
        const int t = center.frame;

        // Window over the frozen input, clipped to the tracklet span.
        std::vector<const BoxState*> window;
        for (const auto& s : trk.states)
            if (std::abs(s.frame - t) <= half) window.push_back(&s);
        if (window.size() < 2) continue;

        const MotionModel model = MotionModel::fit(trk, t, p.motion_model, ctx);
        const double halfdiag = 0.5 * std::hypot(center.w, center.l);
        const double wh = rw.heading * std::max(halfdiag, 1e-3);

        auto residual = [&](const std::vector<double>& v) {
            BoxState b = center;
            b.x = v[0];
            b.y = v[1];
            b.z = v[2];
            b.vx = v[3];
            b.vy = v[4];
            b.theta = v[5];
            std::vector<double> r;
            r.reserve(window.size() * 6);
            for (const BoxState* obs : window) {
                const double dt = ctx.frames_to_seconds(obs->frame - t);
                const BoxState pred = propagate(b, dt, model);
                r.push_back(rw.position * (pred.x - obs->x));
                r.push_back(rw.position * (pred.y - obs->y));
                r.push_back(rw.position * (pred.z - obs->z));
                r.push_back(rw.velocity * (pred.vx - obs->vx));
                r.push_back(rw.velocity * (pred.vy - obs->vy));
                r.push_back(wh * wrap_angle(pred.theta - obs->theta));
            }
            return r;
        };

        const LmResult res = lm_minimize(
            residual, {center.x, center.y, center.z, center.vx, center.vy, center.theta});
        if (!res.converged && warnings)
            warnings->push_back({trk.id, t, res.message});

        BoxState& dst = out.states[idx];
        dst.x = res.x[0];
        dst.y = res.x[1];
        dst.z = res.x[2];
        dst.vx = res.x[3];
        dst.vy = res.x[4];
        dst.theta = wrap_angle(res.x[5]);
    }
    return out;
}

}  // namespace retrack
