#include "retrack/mtm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "retrack/geometry.hpp"

namespace retrack {

PaddedTrackSet pad_and_stack(const std::vector<std::vector<Tracklet>>& inputs,
                             int scene_length) {
    if (scene_length <= 0) throw ArgumentError("pad_and_stack: scene_length must be > 0");
    PaddedTrackSet out;
    out.scene_length = scene_length;
    for (std::size_t src = 0; src < inputs.size(); ++src) {
        for (const auto& trk : inputs[src]) {
            PaddedTrack pt;
            pt.tracklet = trk;
            pt.source = static_cast<int>(src);
            pt.state_index.assign(scene_length, -1);
            for (std::size_t s = 0; s < trk.states.size(); ++s) {
                const int f = trk.states[s].frame;
                if (f < 0 || f >= scene_length)
                    throw DataError("pad_and_stack: state frame " + std::to_string(f) +
                                    " outside scene length " + std::to_string(scene_length));
                pt.state_index[f] = static_cast<int>(s);
            }
            out.tracks.push_back(std::move(pt));
        }
    }
    return out;
}

BinaryAdjacency build_scene_adjacency(const PaddedTrackSet& padded,
                                      const PipelineConfig& cfg) {
    const int n = padded.size();
    BinaryAdjacency adj(n);
    for (int t = 0; t < padded.scene_length; ++t) {
        for (int i = 0; i < n; ++i) {
            if (!padded.tracks[i].valid(t)) continue;
            const BoxState& a = padded.tracks[i].state(t);
            const CategoryParams& p = cfg.params_for(a.cls);
            for (int j = i + 1; j < n; ++j) {
                if (adj.at(i, j) || !padded.tracks[j].valid(t)) continue;
                const double c = cost(a, padded.tracks[j].state(t), p.metric);
                if (c < p.theta_multi) adj.connect(i, j);
            }
        }
    }
    return adj;
}

BoxState fuse_states(const std::vector<const BoxState*>& states, const PipelineConfig& cfg) {
    if (states.empty()) throw ArgumentError("fuse_states: empty state set");
    if (states.size() == 1) return *states.front();

    const int frame = states.front()->frame;
    double wsum = 0.0;
    std::vector<double> weights(states.size(), 0.0);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const BoxState* s = states[i];
        if (s->frame != frame) throw ArgumentError("fuse_states: mixed frames");
        weights[i] = s->conf * (s->interpolated ? cfg.interpolated_weight : 1.0);
        wsum += weights[i];
    }
    if (wsum <= 1e-12) {  // all contributors weightless; fall back to equal weights
        std::fill(weights.begin(), weights.end(), 1.0);
        wsum = static_cast<double>(states.size());
    }

    BoxState out;
    out.frame = frame;
    std::vector<double> headings(states.size());
    bool all_interpolated = true;
    std::map<std::string, double> cls_weight;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const BoxState& s = *states[i];
        const double w = weights[i] / wsum;
        out.x += w * s.x;
        out.y += w * s.y;
        out.z += w * s.z;
        out.w += w * s.w;
        out.l += w * s.l;
        out.h += w * s.h;
        out.vx += w * s.vx;
        out.vy += w * s.vy;
        out.conf += w * s.conf;
        headings[i] = s.theta;
        all_interpolated = all_interpolated && s.interpolated;
        cls_weight[s.cls] += weights[i];
    }
    out.theta = circular_mean(headings, weights);
    out.interpolated = all_interpolated;
    // Majority-weight category; map order breaks exact ties deterministically.
    double best = -1.0;
    for (const auto& [cls, w] : cls_weight) {
        if (w > best) {
            best = w;
            out.cls = cls;
        }
    }
    return out;
}

std::vector<Tracklet> cluster_and_fuse(const PaddedTrackSet& padded,
                                       const BinaryAdjacency& adjacency,
                                       const PipelineConfig& cfg, IdAllocator& ids,
                                       const PipelineHooks* hooks) {
    std::vector<Tracklet> out;
    for (const auto& comp : connected_components(adjacency)) {
        Tracklet fused;
        fused.id = ids.fresh();
        if (comp.size() == 1) {
            const PaddedTrack& only = padded.tracks[comp[0]];
            fused.cls = only.tracklet.cls;
            fused.states = only.tracklet.states;
        } else {
            std::vector<const BoxState*> frame_states;
            for (int t = 0; t < padded.scene_length; ++t) {
                frame_states.clear();
                for (const int m : comp)
                    if (padded.tracks[m].valid(t))
                        frame_states.push_back(&padded.tracks[m].state(t));
                if (frame_states.empty()) continue;
                BoxState s = fuse_states(frame_states, cfg);
                fused.states.push_back(std::move(s));
            }
            if (fused.states.empty()) continue;
            fused.cls = fused.states.front().cls;
        }
        for (auto& s : fused.states) s.id = fused.id;
        if (hooks && hooks->on_cluster) {
            ClusterEvent ev;
            ev.fused_id = fused.id;
            for (const int m : comp)
                ev.members.emplace_back(padded.tracks[m].source, padded.tracks[m].tracklet.id);
            hooks->on_cluster(ev);
        }
        out.push_back(std::move(fused));
    }
    return out;
}

}  // namespace retrack
