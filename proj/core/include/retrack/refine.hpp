#pragma once

#include <vector>

#include "retrack/config.hpp"
#include "retrack/hooks.hpp"
#include "retrack/types.hpp"

namespace retrack {

struct Size3 {
    double w = 0.0;
    double l = 0.0;
    double h = 0.0;
};

/// Softmax-weighted mean size over the K most confident observed states.
Size3 refine_size_topk(const Tracklet& trk, int k);

/// Applies a new size about fixed state centers (the ego-less fallback).
Tracklet apply_size_centered(Tracklet trk, const Size3& size);

/// Applies a new size while holding the BEV corner nearest the ego position
/// fixed per frame; the vertical extent is rescaled about the box bottom.
/// Falls back to the center-aligned resize when ego positions are missing.
Tracklet corner_align(const Tracklet& trk, const std::vector<EgoPose>& ego,
                      const Size3& new_size);

/// Global-perspective refinement: Top-K size regression plus corner-centric
/// center correction, rigid categories only.
Tracklet global_refine(const Tracklet& trk, const std::vector<EgoPose>& ego,
                       const PipelineConfig& cfg);

/// Local-perspective refinement: per frame, the motion attributes (center,
/// velocity, heading) are re-estimated by a windowed least-squares problem
/// over the frozen input trajectory, solved with Levenberg-Marquardt.
/// Non-convergent windows keep the best iterate and emit a warning.
Tracklet sliding_window_refine(const Tracklet& trk, const PipelineConfig& cfg,
                               const SceneContext& ctx,
                               std::vector<RefineWarningEvent>* warnings = nullptr);

}  // namespace retrack
