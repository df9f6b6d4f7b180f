#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "retrack/config.hpp"
#include "retrack/hooks.hpp"
#include "retrack/types.hpp"

namespace retrack {

/// Node set for one frame, index-aligned with the tracklet working set.
/// A node is the stored state when present, a capped bidirectional motion
/// prediction otherwise, or absent.
struct FrameNodes {
    int frame = 0;
    std::vector<std::optional<BoxState>> nodes;
};

FrameNodes build_nodes(const std::vector<Tracklet>& tracklets, int t,
                       const PipelineConfig& cfg, const SceneContext& ctx);

/// Symmetric pairwise dissimilarities at one frame; +inf on the diagonal and
/// wherever a node is absent or the categories differ.
struct FrameCostMatrix {
    int frame = 0;
    int n = 0;
    std::vector<double> values;  // row-major

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
};

FrameCostMatrix build_cost_matrix(const FrameNodes& nodes, const PipelineConfig& cfg);

struct MatchResult {
    std::vector<std::pair<int, int>> pairs;  // tracklet indices, i < j
    std::vector<int> unmatched;
};

/// Blossom matching over node pairs whose cost clears the re-identification
/// gate and whose lifespans do not overlap.
MatchResult match_frame(const std::vector<Tracklet>& tracklets, const FrameNodes& nodes,
                        const PipelineConfig& cfg);

/// Fuses two fragments with disjoint lifespans into one tracklet under a
/// fresh id; every missing interior frame is filled by bidirectional motion
/// interpolation and marked interpolated.
Tracklet fuse_pair(const Tracklet& a, const Tracklet& b, const PipelineConfig& cfg,
                   const SceneContext& ctx, IdAllocator& ids);

/// Frame-by-frame matching and fusion, swept over the scene until a full
/// sweep produces no merge or the outer-iteration cap is reached.
std::vector<Tracklet> stwo_pass(std::vector<Tracklet> tracklets, const PipelineConfig& cfg,
                                const SceneContext& ctx, IdAllocator& ids,
                                const PipelineHooks* hooks = nullptr);

}  // namespace retrack
