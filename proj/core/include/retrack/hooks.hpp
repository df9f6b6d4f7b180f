#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace retrack {

/// One re-identification merge (two fragments fused at a frame).
struct MergeEvent {
    int frame = 0;
    std::int64_t id_a = 0;
    std::int64_t id_b = 0;
    double cost = 0.0;
    std::int64_t new_id = 0;
};

/// A reliable segment carved out of an entangled tracklet.
struct SplitEvent {
    std::int64_t source_id = 0;
    std::int64_t new_id = 0;
    int t_start = 0;
    int t_end = 0;
};

/// Co-frame entangled states fused into a fresh tracklet.
struct EntangleEvent {
    int frame = 0;
    std::vector<std::int64_t> member_ids;
    std::int64_t new_id = 0;
};

/// Cross-tracker cluster membership (source index, original tracklet id).
struct ClusterEvent {
    std::int64_t fused_id = 0;
    std::vector<std::pair<int, std::int64_t>> members;
};

/// Emitted when window optimization stops without meeting its tolerances.
struct RefineWarningEvent {
    std::int64_t id = 0;
    int frame = 0;
    std::string reason;
};

/// Optional stage observers; leave empty to disable tracing.
struct PipelineHooks {
    std::function<void(const MergeEvent&)> on_merge;
    std::function<void(const SplitEvent&)> on_split;
    std::function<void(const EntangleEvent&)> on_entangle;
    std::function<void(const ClusterEvent&)> on_cluster;
    std::function<void(const RefineWarningEvent&)> on_refine_warning;
};

}  // namespace retrack
