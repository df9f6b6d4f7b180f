#include "retrack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "retrack/mtm.hpp"
#include "retrack/preprocess.hpp"
#include "retrack/refine.hpp"
#include "retrack/stw.hpp"
#include "retrack/stwo.hpp"

namespace retrack {

std::vector<std::string> validate(const TrackerOutput& output) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& msg) { out.push_back(msg); };

    if (output.scene_length <= 0) fail("scene_length must be > 0");
    if (!(output.frame_rate > 0.0)) fail("frame_rate must be > 0");
    if (!output.ego.empty() && static_cast<int>(output.ego.size()) != output.scene_length)
        fail("ego track length does not match scene_length");

    std::set<std::int64_t> seen_ids;
    for (const auto& trk : output.tracklets) {
        std::ostringstream who;
        who << "tracklet " << trk.id << ": ";
        if (!seen_ids.insert(trk.id).second) fail(who.str() + "duplicate id");
        if (trk.empty()) {
            fail(who.str() + "no states");
            continue;
        }
        int prev_frame = -1;
        bool first = true;
        for (const auto& s : trk.states) {
            std::ostringstream where;
            where << "tracklet " << trk.id << " frame " << s.frame << ": ";
            if (!first && s.frame <= prev_frame)
                fail(where.str() + "frames not strictly increasing");
            prev_frame = s.frame;
            first = false;
            if (s.id != trk.id) fail(where.str() + "state id differs from tracklet id");
            if (s.cls != trk.cls) fail(where.str() + "state category differs from tracklet");
            if (s.frame < 0 || s.frame >= output.scene_length)
                fail(where.str() + "frame outside [0, scene_length)");
            if (!(s.w > 0.0) || !(s.l > 0.0) || !(s.h > 0.0))
                fail(where.str() + "non-positive size");
            if (s.conf < 0.0 || s.conf > 1.0) fail(where.str() + "conf outside [0, 1]");
            if (s.theta <= -M_PI - 1e-12 || s.theta > M_PI + 1e-12)
                fail(where.str() + "theta outside (-pi, pi]");
            for (const double v : {s.x, s.y, s.z, s.vx, s.vy, s.theta, s.conf})
                if (!std::isfinite(v)) {
                    fail(where.str() + "non-finite field");
                    break;
                }
        }
    }
    return out;
}

namespace {

std::vector<Tracklet> refine_stage(std::vector<Tracklet> tracklets,
                                   const std::vector<EgoPose>& ego,
                                   const PipelineConfig& cfg, const SceneContext& ctx,
                                   const PipelineHooks* hooks) {
    auto run_global = [&]() {
        for (auto& trk : tracklets) trk = global_refine(trk, ego, cfg);
    };
    auto run_local = [&]() {
        std::vector<RefineWarningEvent> warnings;
        for (auto& trk : tracklets)
            trk = sliding_window_refine(trk, cfg, ctx, &warnings);
        if (hooks && hooks->on_refine_warning)
            for (const auto& w : warnings) hooks->on_refine_warning(w);
    };
    if (cfg.local_before_global) {
        if (cfg.enable_local_refine) run_local();
        if (cfg.enable_global_refine) run_global();
    } else {
        if (cfg.enable_global_refine) run_global();
        if (cfg.enable_local_refine) run_local();
    }
    return tracklets;
}

}  // namespace

TrackerOutput run_pipeline(const std::vector<TrackerOutput>& inputs,
                           const PipelineConfig& cfg, const PipelineHooks* hooks) {
    if (inputs.empty()) throw ArgumentError("run_pipeline: no inputs");
    const auto cfg_issues = cfg.validate();
    if (!cfg_issues.empty())
        throw ArgumentError("run_pipeline: invalid config: " + cfg_issues.front());

    const int scene_length = inputs.front().scene_length;
    const double frame_rate = inputs.front().frame_rate;
    for (const auto& in : inputs) {
        if (in.scene_length != scene_length || in.frame_rate != frame_rate)
            throw DataError("run_pipeline: rejected input '" + in.source_name +
                            "': scene metadata mismatch");
        const auto issues = validate(in);
        if (!issues.empty())
            throw DataError("run_pipeline: rejected input '" + in.source_name +
                            "': " + issues.front());
    }

    const SceneContext ctx{scene_length, frame_rate};
    IdAllocator ids = IdAllocator::above(inputs);

    std::vector<EgoPose> ego;
    for (const auto& in : inputs)
        if (!in.ego.empty()) {
            ego = in.ego;
            break;
        }

    // Per-source cleanup and intra-tracker matching.
    std::vector<std::vector<Tracklet>> refined_sets;
    for (const auto& in : inputs) {
        TrackerOutput work = cfg.enable_preprocess ? filter_tracklets(in, cfg) : in;
        std::vector<Tracklet> set = std::move(work.tracklets);
        auto run_stwo = [&]() { set = stwo_pass(std::move(set), cfg, ctx, ids, hooks); };
        auto run_stw = [&]() { set = stw_pass(set, cfg, ctx, ids, hooks); };
        if (cfg.stw_before_stwo) {
            if (cfg.enable_stw) run_stw();
            if (cfg.enable_stwo) run_stwo();
        } else {
            if (cfg.enable_stwo) run_stwo();
            if (cfg.enable_stw) run_stw();
        }
        refined_sets.push_back(std::move(set));
    }

    // Cross-tracker consolidation.
    std::vector<Tracklet> merged;
    if (cfg.enable_mtm) {
        const PaddedTrackSet padded = pad_and_stack(refined_sets, scene_length);
        const BinaryAdjacency adjacency = build_scene_adjacency(padded, cfg);
        merged = cluster_and_fuse(padded, adjacency, cfg, ids, hooks);
    } else {
        for (auto& set : refined_sets)
            for (auto& trk : set) merged.push_back(std::move(trk));
    }

    merged = refine_stage(std::move(merged), ego, cfg, ctx, hooks);

    // Fresh sequential ids in a canonical order.
    std::stable_sort(merged.begin(), merged.end(), [](const Tracklet& a, const Tracklet& b) {
        if (a.empty() || b.empty()) return b.empty() < a.empty();
        if (a.t_start() != b.t_start()) return a.t_start() < b.t_start();
        if (a.t_end() != b.t_end()) return a.t_end() < b.t_end();
        if (a.cls != b.cls) return a.cls < b.cls;
        return a.id < b.id;
    });
    TrackerOutput out;
    out.source_name = "retrack";
    out.scene_id = inputs.front().scene_id;
    out.scene_length = scene_length;
    out.frame_rate = frame_rate;
    out.ego = ego;
    std::int64_t next_id = 1;
    for (auto& trk : merged) {
        if (trk.empty()) continue;
        trk.id = next_id++;
        for (auto& s : trk.states) s.id = trk.id;
        out.tracklets.push_back(std::move(trk));
    }
    return out;
}

}  // namespace retrack
