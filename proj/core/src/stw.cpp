#include "retrack/stw.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "retrack/geometry.hpp"
#include "retrack/graph.hpp"
#include "retrack/mtm.hpp"
#include "retrack/stwo.hpp"

namespace retrack {

namespace {

// Stored state usable for adjacency at a frame, honoring the interpolation
// filter.
const BoxState* adjacency_state(const Tracklet& trk, int t, const PipelineConfig& cfg) {
    const BoxState* s = trk.state_at(t);
    if (s && cfg.stw_ignore_interpolated && s->interpolated) return nullptr;
    return s;
}

bool stw_connected(const BoxState& a, const BoxState& b, const PipelineConfig& cfg) {
    return cost(a, b, Metric::GIou3d) < cfg.params_for(a.cls).theta_stw;
}

// Frame range covered by any member.
std::pair<int, int> member_span(const std::vector<Tracklet>& members) {
    int lo = members.front().t_start();
    int hi = members.front().t_end();
    for (const auto& m : members) {
        lo = std::min(lo, m.t_start());
        hi = std::max(hi, m.t_end());
    }
    return {lo, hi};
}

}  // namespace

std::vector<Cluster> connect_tracklets(const std::vector<Tracklet>& in,
                                       const PipelineConfig& cfg, const SceneContext& ctx) {
    const int n = static_cast<int>(in.size());
    BinaryAdjacency adj(n);
    for (int t = 0; t < ctx.scene_length; ++t) {
        for (int i = 0; i < n; ++i) {
            const BoxState* a = adjacency_state(in[i], t, cfg);
            if (!a) continue;
            for (int j = i + 1; j < n; ++j) {
                if (adj.at(i, j)) continue;
                const BoxState* b = adjacency_state(in[j], t, cfg);
                if (b && stw_connected(*a, *b, cfg)) adj.connect(i, j);
            }
        }
    }
    std::vector<Cluster> clusters;
    for (const auto& comp : connected_components(adj)) {
        Cluster c;
        for (const int idx : comp) c.members.push_back(in[idx]);
        clusters.push_back(std::move(c));
    }
    return clusters;
}

std::vector<Tracklet> separate_cluster(const Cluster& c, const PipelineConfig& cfg,
                                       IdAllocator& ids, const PipelineHooks* hooks,
                                       std::set<std::int64_t>* entangled_ids) {
    const int n = static_cast<int>(c.members.size());
    if (n < 2) return c.members;

    const auto [lo, hi] = member_span(c.members);

    // Per-frame entangled components over the members.
    struct EntangledGroup {
        int frame;
        std::vector<int> members;
    };
    std::vector<EntangledGroup> groups;
    std::vector<std::vector<bool>> entangled(n);
    for (int i = 0; i < n; ++i) entangled[i].assign(hi - lo + 1, false);

    for (int t = lo; t <= hi; ++t) {
        std::vector<const BoxState*> present(n, nullptr);
        BinaryAdjacency adj(n);
        for (int i = 0; i < n; ++i) present[i] = adjacency_state(c.members[i], t, cfg);
        for (int i = 0; i < n; ++i) {
            if (!present[i]) continue;
            for (int j = i + 1; j < n; ++j)
                if (present[j] && stw_connected(*present[i], *present[j], cfg))
                    adj.connect(i, j);
        }
        for (const auto& comp : connected_components(adj)) {
            if (comp.size() < 2) continue;
            std::vector<int> with_state;
            for (const int m : comp)
                if (present[m]) with_state.push_back(m);
            if (with_state.size() < 2) continue;
            for (const int m : with_state) entangled[m][t - lo] = true;
            groups.push_back({t, std::move(with_state)});
        }
    }

    std::vector<Tracklet> out;

    // Reliable segments: split each member at its entangled frames only;
    // plain observation gaps do not split.
    for (int i = 0; i < n; ++i) {
        const Tracklet& m = c.members[i];
        Tracklet piece;
        auto flush = [&]() {
            if (piece.states.empty()) return;
            piece.id = ids.fresh();
            piece.cls = m.cls;
            for (auto& s : piece.states) s.id = piece.id;
            if (hooks && hooks->on_split)
                hooks->on_split({m.id, piece.id, piece.t_start(), piece.t_end()});
            out.push_back(std::move(piece));
            piece = Tracklet{};
        };
        for (const auto& s : m.states) {
            if (entangled[i][s.frame - lo]) {
                flush();
            } else {
                piece.states.push_back(s);
            }
        }
        flush();
    }

    // Entangled components become fresh tracklets: one per frame, or one per
    // run of consecutive frames with identical membership when configured.
    if (cfg.stw_merge_entangled_runs) {
        std::sort(groups.begin(), groups.end(),
                  [](const EntangledGroup& a, const EntangledGroup& b) {
                      return a.members < b.members ||
                             (a.members == b.members && a.frame < b.frame);
                  });
    } else {
        std::sort(groups.begin(), groups.end(),
                  [](const EntangledGroup& a, const EntangledGroup& b) {
                      return a.frame < b.frame || (a.frame == b.frame && a.members < b.members);
                  });
    }
    std::size_t g = 0;
    while (g < groups.size()) {
        std::size_t run_end = g + 1;
        if (cfg.stw_merge_entangled_runs) {
            while (run_end < groups.size() &&
                   groups[run_end].frame == groups[run_end - 1].frame + 1 &&
                   groups[run_end].members == groups[g].members)
                ++run_end;
        }
        Tracklet fused;
        fused.id = ids.fresh();
        if (entangled_ids) entangled_ids->insert(fused.id);
        for (std::size_t r = g; r < run_end; ++r) {
            std::vector<const BoxState*> states;
            for (const int m : groups[r].members)
                states.push_back(c.members[m].state_at(groups[r].frame));
            BoxState s = fuse_states(states, cfg);
            s.id = fused.id;
            fused.states.push_back(std::move(s));
        }
        fused.cls = fused.states.front().cls;
        for (auto& s : fused.states) s.cls = fused.cls;
        if (hooks && hooks->on_entangle) {
            EntangleEvent ev;
            ev.frame = groups[g].frame;
            ev.new_id = fused.id;
            for (const int m : groups[g].members) ev.member_ids.push_back(c.members[m].id);
            hooks->on_entangle(ev);
        }
        out.push_back(std::move(fused));
        g = run_end;
    }
    return out;
}

std::vector<Tracklet> reorganize_cluster(std::vector<Tracklet> segments,
                                         const PipelineConfig& cfg, const SceneContext& ctx,
                                         IdAllocator& ids, const PipelineHooks* hooks) {
    return stwo_pass(std::move(segments), cfg, ctx, ids, hooks);
}

namespace {

// When the reliable segments relink across an encounter, their merged spans
// cover the entangled frames and the fused conflict nodes can no longer be
// matched (overlapping lifespans). Fold each stranded node's states into the
// geometrically closest tracklet, replacing its interpolated fill there, so
// the observed evidence is kept without spawning one-frame outputs.
void absorb_stranded_nodes(std::vector<Tracklet>& relinked,
                           const std::set<std::int64_t>& entangled_ids) {
    std::vector<Tracklet> keep;
    std::vector<Tracklet> stranded;
    for (auto& trk : relinked) {
        if (entangled_ids.count(trk.id)) stranded.push_back(std::move(trk));
        else keep.push_back(std::move(trk));
    }
    for (auto& trk : stranded) {
        std::vector<BoxState> unplaced;
        for (const auto& s : trk.states) {
            bool frame_covered = false;
            Tracklet* best = nullptr;
            double best_dist = std::numeric_limits<double>::infinity();
            for (auto& host : keep) {
                const BoxState* at = host.state_at(s.frame);
                if (!at) continue;
                frame_covered = true;
                if (!at->interpolated) continue;
                const double d = std::hypot(s.x - at->x, s.y - at->y);
                if (d < best_dist) {
                    best_dist = d;
                    best = &host;
                }
            }
            if (best && best_dist <= 0.3 * std::min(best->state_at(s.frame)->w,
                                                    best->state_at(s.frame)->l)) {
                // Keep the node's detection-level evidence; its heading and
                // velocity are blends of both conflict members, so take those
                // from the host trajectory.
                const BoxState* at = best->state_at(s.frame);
                BoxState merged = s;
                merged.theta = at->theta;
                merged.vx = at->vx;
                merged.vy = at->vy;
                merged.id = best->id;
                merged.interpolated = false;
                auto it = std::lower_bound(
                    best->states.begin(), best->states.end(), s.frame,
                    [](const BoxState& a, int f) { return a.frame < f; });
                *it = std::move(merged);
            } else if (!frame_covered) {
                unplaced.push_back(s);
            }
            // Covered but incompatible with every reconstructed trajectory:
            // ambiguous conflict evidence, dropped.
        }
        if (!unplaced.empty()) {
            Tracklet rest = std::move(trk);
            rest.states = std::move(unplaced);
            keep.push_back(std::move(rest));
        }
    }
    relinked = std::move(keep);
}

}  // namespace

std::vector<Tracklet> stw_pass(const std::vector<Tracklet>& in, const PipelineConfig& cfg,
                               const SceneContext& ctx, IdAllocator& ids,
                               const PipelineHooks* hooks) {
    std::vector<Tracklet> out;
    for (const auto& cluster : connect_tracklets(in, cfg, ctx)) {
        if (cluster.members.size() < 2) {
            out.push_back(cluster.members.front());
            continue;
        }
        std::set<std::int64_t> entangled_ids;
        std::vector<Tracklet> segments =
            separate_cluster(cluster, cfg, ids, hooks, &entangled_ids);

        // Conflict nodes merging with each other stay conflict nodes; merging
        // with a reliable segment makes an ordinary tracklet.
        PipelineHooks local;
        if (hooks) local = *hooks;
        const auto user_merge = local.on_merge;
        local.on_merge = [&](const MergeEvent& e) {
            if (entangled_ids.count(e.id_a) && entangled_ids.count(e.id_b))
                entangled_ids.insert(e.new_id);
            entangled_ids.erase(e.id_a);
            entangled_ids.erase(e.id_b);
            if (user_merge) user_merge(e);
        };
        std::vector<Tracklet> relinked =
            reorganize_cluster(std::move(segments), cfg, ctx, ids, &local);
        absorb_stranded_nodes(relinked, entangled_ids);
        for (auto& trk : relinked) out.push_back(std::move(trk));
    }
    return out;
}

}  // namespace retrack
