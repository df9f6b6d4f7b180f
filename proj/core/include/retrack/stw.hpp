#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "retrack/config.hpp"
#include "retrack/hooks.hpp"
#include "retrack/types.hpp"

namespace retrack {

/// Tracklets grouped by scene-level geometric similarity.
struct Cluster {
    std::vector<Tracklet> members;
};

/// Groups tracklets whose gIoU-based cost clears the disentangling gate at
/// any frame, transitively. Singleton clusters are passed through untouched
/// by the later stages.
std::vector<Cluster> connect_tracklets(const std::vector<Tracklet>& in,
                                       const PipelineConfig& cfg, const SceneContext& ctx);

/// Splits every member at its entangled frames (frames where it belongs to a
/// per-frame connected component of size >= 2). Reliable segments keep their
/// original states; each per-frame entangled component is fused into a
/// single-frame tracklet. Everything gets a fresh id. When `entangled_ids`
/// is given, the ids of the fused conflict-node tracklets are reported there.
std::vector<Tracklet> separate_cluster(const Cluster& c, const PipelineConfig& cfg,
                                       IdAllocator& ids,
                                       const PipelineHooks* hooks = nullptr,
                                       std::set<std::int64_t>* entangled_ids = nullptr);

/// Relinks the separated segments with bidirectional motion prediction (the
/// re-identification pass applied to the segment set).
std::vector<Tracklet> reorganize_cluster(std::vector<Tracklet> segments,
                                         const PipelineConfig& cfg, const SceneContext& ctx,
                                         IdAllocator& ids,
                                         const PipelineHooks* hooks = nullptr);

/// Full disentangling stage: connect, then separate and reorganize each
/// non-singleton cluster.
std::vector<Tracklet> stw_pass(const std::vector<Tracklet>& in, const PipelineConfig& cfg,
                               const SceneContext& ctx, IdAllocator& ids,
                               const PipelineHooks* hooks = nullptr);

}  // namespace retrack
