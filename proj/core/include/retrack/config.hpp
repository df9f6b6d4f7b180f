#pragma once

#include <map>
#include <string>
#include <vector>

namespace retrack {

/// Overlap measure used for association costs.
enum class Metric { IouBev, Iou3d, GIou3d };

enum class MotionModelKind { ConstantVelocity, Ctra };

/// Objective for the general-graph matcher.
enum class MatchingObjective { MaxWeight, MaxCardinality };

const char* to_string(Metric m);
const char* to_string(MotionModelKind k);

/// Per-category thresholds and model selection.
struct CategoryParams {
    int theta_age = 3;            // preprocess: minimum age (frames)
    double theta_score = 0.2;     // preprocess: minimum mean confidence
    double theta_blo = 0.9;       // re-identification cost gate
    double theta_multi = 0.75;    // multi-tracker cost gate
    double theta_stw = 0.7;       // overlap-disentangling gIoU cost gate
    MotionModelKind motion_model = MotionModelKind::ConstantVelocity;
    Metric metric = Metric::IouBev;  // matching metric (re-id and multi-tracker)
    int topk = 10;                // size refinement: credible observations
    double window_halfspan = 2.0;  // seconds, each side of the refined frame
    bool rigid = true;            // size refinement applies only to rigid classes
    double prediction_cap = 1.0;  // seconds; longer extrapolations are discarded
};

/// Residual weighting for the sliding-window objective. Heading residuals are
/// converted to meters via the box half-diagonal before weighting.
struct RefineWeights {
    double position = 1.0;
    double velocity = 0.5;
    double heading = 1.0;
};

struct PipelineConfig {
    std::map<std::string, CategoryParams> categories;
    CategoryParams defaults;

    // Stage toggles.
    bool enable_preprocess = true;
    bool enable_stwo = true;
    bool enable_stw = true;
    bool enable_mtm = true;
    bool enable_global_refine = true;
    bool enable_local_refine = true;

    // Stage ordering. Defaults follow the best-performing order.
    bool stw_before_stwo = false;
    bool local_before_global = false;

    int stwo_max_sweeps = 4;  // outer-iteration cap for iterative re-identification
    MatchingObjective matching_objective = MatchingObjective::MaxWeight;

    // Overlap disentangling: skip interpolated states when building frame
    // adjacency, and optionally merge consecutive entangled frames with the
    // same membership into one tracklet instead of one tracklet per frame.
    bool stw_ignore_interpolated = false;
    bool stw_merge_entangled_runs = false;

    // Multi-tracker fusion weight multiplier for interpolated states.
    double interpolated_weight = 0.5;

    bool enable_corner_align = true;
    RefineWeights refine_weights;

    const CategoryParams& params_for(const std::string& cls) const {
        auto it = categories.find(cls);
        return it == categories.end() ? defaults : it->second;
    }

    /// Returns one message per out-of-range field; empty means valid.
    std::vector<std::string> validate() const;
};

}  // namespace retrack
