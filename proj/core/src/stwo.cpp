#include "retrack/stwo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "retrack/geometry.hpp"
#include "retrack/graph.hpp"
#include "retrack/motion.hpp"

namespace retrack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

FrameNodes build_nodes(const std::vector<Tracklet>& tracklets, int t,
                       const PipelineConfig& cfg, const SceneContext& ctx) {
    FrameNodes out;
    out.frame = t;
    out.nodes.reserve(tracklets.size());
    for (const auto& trk : tracklets) {
        const CategoryParams& p = cfg.params_for(trk.cls);
        out.nodes.push_back(predict_node(trk, t, p.prediction_cap, p.motion_model, ctx));
    }
    return out;
}

FrameCostMatrix build_cost_matrix(const FrameNodes& nodes, const PipelineConfig& cfg) {
    const int n = static_cast<int>(nodes.nodes.size());
    FrameCostMatrix m;
    m.frame = nodes.frame;
    m.n = n;
    m.values.assign(static_cast<std::size_t>(n) * n, kInf);
    for (int i = 0; i < n; ++i) {
        if (!nodes.nodes[i]) continue;
        for (int j = i + 1; j < n; ++j) {
            if (!nodes.nodes[j]) continue;
            const BoxState& a = *nodes.nodes[i];
            const BoxState& b = *nodes.nodes[j];
            const double c = cost(a, b, cfg.params_for(a.cls).metric);
            m.values[static_cast<std::size_t>(i) * n + j] = c;
            m.values[static_cast<std::size_t>(j) * n + i] = c;
        }
    }
    return m;
}

MatchResult match_frame(const std::vector<Tracklet>& tracklets, const FrameNodes& nodes,
                        const PipelineConfig& cfg) {
    const int n = static_cast<int>(tracklets.size());
    const FrameCostMatrix costs = build_cost_matrix(nodes, cfg);

    WeightedGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double c = costs.at(i, j);
            if (!std::isfinite(c)) continue;
            if (tracklets[i].lifespan_overlaps(tracklets[j])) continue;
            const double gate = cfg.params_for(tracklets[i].cls).theta_blo;
            if (c < gate) g.edges.push_back({i, j, gate - c});
        }
    }

    MatchResult res;
    res.pairs = max_weight_matching(g, cfg.matching_objective);
    std::vector<bool> matched(n, false);
    for (const auto& [i, j] : res.pairs) matched[i] = matched[j] = true;
    for (int i = 0; i < n; ++i)
        if (!matched[i]) res.unmatched.push_back(i);
    return res;
}

Tracklet fuse_pair(const Tracklet& a, const Tracklet& b, const PipelineConfig& cfg,
                   const SceneContext& ctx, IdAllocator& ids) {
    if (a.empty() || b.empty()) throw ArgumentError("fuse_pair: empty tracklet");
    if (a.cls != b.cls) throw ArgumentError("fuse_pair: category mismatch");
    if (a.lifespan_overlaps(b)) throw ArgumentError("fuse_pair: overlapping lifespans");

    Tracklet merged;
    merged.id = ids.fresh();
    merged.cls = a.cls;
    const Tracklet& first = a.t_start() <= b.t_start() ? a : b;
    const Tracklet& second = a.t_start() <= b.t_start() ? b : a;
    merged.states = first.states;
    merged.states.insert(merged.states.end(), second.states.begin(), second.states.end());

    // Interpolate every missing interior frame against the pre-fill anchors.
    const CategoryParams& p = cfg.params_for(merged.cls);
    std::vector<BoxState> fills;
    for (int t = merged.t_start() + 1; t < merged.t_end(); ++t) {
        if (merged.state_at(t)) continue;
        auto filled = predict_node(merged, t, kInf, p.motion_model, ctx);
        if (filled) fills.push_back(*filled);
    }
    for (auto& f : fills) merged.insert_state(std::move(f));
    for (auto& s : merged.states) s.id = merged.id;
    return merged;
}

std::vector<Tracklet> stwo_pass(std::vector<Tracklet> tracklets, const PipelineConfig& cfg,
                                const SceneContext& ctx, IdAllocator& ids,
                                const PipelineHooks* hooks) {
    for (int sweep = 0; sweep < cfg.stwo_max_sweeps; ++sweep) {
        int merges = 0;
        for (int t = 0; t < ctx.scene_length; ++t) {
            if (tracklets.size() < 2) break;
            const FrameNodes nodes = build_nodes(tracklets, t, cfg, ctx);
            const MatchResult match = match_frame(tracklets, nodes, cfg);
            if (match.pairs.empty()) continue;

            FrameCostMatrix costs;  // only needed for trace records
            if (hooks && hooks->on_merge) costs = build_cost_matrix(nodes, cfg);
            std::vector<Tracklet> next;
            std::vector<int> partner(tracklets.size(), -1);
            for (const auto& [i, j] : match.pairs) {
                partner[i] = j;
                partner[j] = i;
            }
            std::vector<bool> consumed(tracklets.size(), false);
            for (std::size_t i = 0; i < tracklets.size(); ++i) {
                if (consumed[i]) continue;
                if (partner[i] < 0) {
                    next.push_back(std::move(tracklets[i]));
                    continue;
                }
                const int j = partner[i];
                Tracklet merged = fuse_pair(tracklets[i], tracklets[j], cfg, ctx, ids);
                if (hooks && hooks->on_merge)
                    hooks->on_merge({t, tracklets[i].id, tracklets[j].id,
                                     costs.at(static_cast<int>(i), j), merged.id});

                consumed[i] = consumed[j] = true;
                next.push_back(std::move(merged));
                ++merges;
            }
            tracklets = std::move(next);
        }
        if (merges == 0) break;
    }
    return tracklets;
}

}  // namespace retrack
