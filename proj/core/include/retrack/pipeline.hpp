#pragma once

#include <string>
#include <vector>

#include "retrack/config.hpp"
#include "retrack/hooks.hpp"
#include "retrack/types.hpp"

namespace retrack {

/// Checks every structural invariant of a tracker output (unique ids,
/// strictly increasing frames, fields in range, id/category consistency).
/// Returns one message per violation; an empty list means valid.
std::vector<std::string> validate(const TrackerOutput& output);

/// End-to-end refinement of one scene: per-source pre-processing and
/// intra-tracker matching, cross-tracker fusion, then geometric and
/// kinematic refinement. Deterministic; output ids are fresh sequential
/// integers starting at 1.
///
/// Throws ArgumentError on an empty input set and DataError when the inputs
/// disagree on scene metadata or violate structural invariants.
TrackerOutput run_pipeline(const std::vector<TrackerOutput>& inputs,
                           const PipelineConfig& cfg,
                           const PipelineHooks* hooks = nullptr);

}  // namespace retrack
