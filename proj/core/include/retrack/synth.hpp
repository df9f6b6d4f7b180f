#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "retrack/config.hpp"
#include "retrack/types.hpp"

namespace retrack::synth {

/// Scene generation parameters. Crossing pairs are placed so the two objects
/// pass within overlap distance of each other mid-scene.
struct SceneSpec {
    int n_objects = 10;
    int scene_length = 40;
    double frame_rate = 2.0;
    double extent = 60.0;      // object start positions drawn from [-extent, extent]^2
    double speed_min = 2.0;    // m/s
    double speed_max = 8.0;
    double ctra_fraction = 0.0;  // fraction of objects on turning trajectories
    int crossing_pairs = 0;      // objects consumed in close-passing pairs (2 each)
    std::string cls = "car";
    bool with_ego = true;
};

struct SyntheticScene {
    TrackerOutput gt;  // gap-free ground truth, conf = 1, ego attached
    std::uint64_t seed = 0;
    SceneSpec spec;
};

/// Deterministic ground-truth scene. Trajectories follow their motion spec
/// exactly (each state is propagated analytically from the initial state).
SyntheticScene generate(std::uint64_t seed, const SceneSpec& spec);

/// Degradations applied to a ground-truth scene, reproducible from the seed.
struct CorruptionSpec {
    double pos_noise = 0.0;    // sigma, meters, on x and y
    double size_noise = 0.0;   // sigma, meters, on w/l/h
    double theta_noise = 0.0;  // sigma, radians
    double vel_noise = 0.0;    // sigma, m/s, on vx and vy
    // Size errors keep the BEV corner nearest the ego fixed (detectors locate
    // the visible corner well and guess the far side), biasing the center.
    bool corner_anchored_size_noise = true;

    int fragment_events = 0;  // tracklets cut in two with a gap
    int min_gap_frames = 1;
    int max_gap_frames = 2;

    int ghost_count = 0;  // short-lived low-confidence clutter tracklets
    int ghost_max_age = 2;
    double ghost_conf_min = 0.02;
    double ghost_conf_max = 0.15;

    double dropout = 0.0;  // per-state drop probability
    std::vector<int> dropout_frames;  // explicit frames to drop (applied to all tracklets)

    int id_swaps = 0;  // tail swaps between close-passing tracklet pairs

    double conf_min = 0.5;  // confidence range for non-ghost states
    double conf_max = 1.0;
};

constexpr std::int64_t kGhost = -1;

struct CorruptedOutput {
    TrackerOutput output;
    std::map<std::int64_t, std::int64_t> provenance;  // output id -> gt id or kGhost
    int applied_fragments = 0;
    int applied_swaps = 0;
    int applied_ghosts = 0;
};

CorruptedOutput corrupt(const SyntheticScene& scene, const CorruptionSpec& spec,
                        std::uint64_t seed);

/// Desk-scale tracking metrics from greedy per-frame BEV-IoU matching.
struct Metrics {
    int gt_states = 0;
    int pred_states = 0;
    int matches = 0;
    int fp = 0;
    int fn = 0;
    int ids = 0;
    double score = 0.0;               // 1 - (fp + fn + ids) / gt_states
    double fragment_recovery = 0.0;   // fraction of gt objects covered by one pred id
};

Metrics score(const TrackerOutput& pred, const TrackerOutput& gt, double iou_gate = 0.5);

/// Per-frame coverage of each gt tracklet by any prediction within the gate:
/// gt id -> number of covered frames.
std::map<std::int64_t, int> coverage_by_object(const TrackerOutput& pred,
                                               const TrackerOutput& gt, double iou_gate = 0.5);

/// Constant-velocity Kalman filter + Rauch-Tung-Striebel smoother over the
/// (x, y) track of one tracklet. Comparison oracle for the window refiner;
/// not part of the pipeline.
Tracklet rts_smooth(const Tracklet& trk, const SceneContext& ctx, double process_noise = 1.0,
                    double measurement_noise = 0.04);

}  // namespace retrack::synth
