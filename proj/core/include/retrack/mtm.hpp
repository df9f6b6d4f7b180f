#pragma once

#include <vector>

#include "retrack/config.hpp"
#include "retrack/graph.hpp"
#include "retrack/hooks.hpp"
#include "retrack/types.hpp"

namespace retrack {

/// One tracklet padded to the scene length: state_index[frame] addresses
/// tracklet.states, -1 where the mask is false.
struct PaddedTrack {
    Tracklet tracklet;
    int source = 0;  // index of the originating tracker output
    std::vector<int> state_index;

    bool valid(int frame) const { return state_index[frame] >= 0; }
    const BoxState& state(int frame) const { return tracklet.states[state_index[frame]]; }
};

struct PaddedTrackSet {
    int scene_length = 0;
    std::vector<PaddedTrack> tracks;

    int size() const { return static_cast<int>(tracks.size()); }
};

/// Concatenates tracklets from all sources in order and pads each to the
/// scene length. States outside [0, scene_length) are rejected.
PaddedTrackSet pad_and_stack(const std::vector<std::vector<Tracklet>>& inputs,
                             int scene_length);

/// Scene-level connectivity: per-frame costs are binarized against the
/// multi-tracker gate and max-pooled over time. Per-frame slices are
/// computed lazily and never materialized.
BinaryAdjacency build_scene_adjacency(const PaddedTrackSet& padded, const PipelineConfig& cfg);

/// Confidence-weighted average of co-frame states: positions, sizes and
/// velocities arithmetic, heading circular, category by majority weight.
/// Interpolated states contribute with a reduced weight.
BoxState fuse_states(const std::vector<const BoxState*>& states, const PipelineConfig& cfg);

/// Extracts connected clusters and fuses each into a single tracklet with a
/// fresh id; per-frame coverage is the union of member coverages.
std::vector<Tracklet> cluster_and_fuse(const PaddedTrackSet& padded,
                                       const BinaryAdjacency& adjacency,
                                       const PipelineConfig& cfg, IdAllocator& ids,
                                       const PipelineHooks* hooks = nullptr);

}  // namespace retrack
