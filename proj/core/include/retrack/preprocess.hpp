#pragma once

#include "retrack/config.hpp"
#include "retrack/types.hpp"

namespace retrack {

/// Tracklet-level ghost filter: removes a tracklet only when its age AND its
/// mean observed confidence both fall below the per-category thresholds.
/// Survivors are passed through unchanged.
TrackerOutput filter_tracklets(const TrackerOutput& in, const PipelineConfig& cfg);

}  // namespace retrack
