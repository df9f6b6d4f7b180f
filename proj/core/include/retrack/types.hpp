#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace retrack {

/// Thrown when a caller violates an operation precondition.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown on malformed input data (files, records, scene metadata).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a numerical routine encounters non-finite values.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double theta) {
    double r = std::remainder(theta, 2.0 * M_PI);
    if (r <= -M_PI) r += 2.0 * M_PI;
    return r;
}

/// Mean direction of weighted unit vectors; returns wrap_angle(atan2(sum sin, sum cos)).
double circular_mean(const std::vector<double>& angles, const std::vector<double>& weights);

/// One per-frame object state. Positions are global-frame meters, heading in
/// (-pi, pi], l measured along the heading axis and w across it.
struct BoxState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;  // box center height
    double w = 0.0;
    double l = 0.0;
    double h = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double theta = 0.0;
    double conf = 0.0;
    int frame = 0;
    std::string cls;
    std::int64_t id = 0;
    bool interpolated = false;

    double z_bottom() const { return z - 0.5 * h; }
    double z_top() const { return z + 0.5 * h; }
    bool same_pose_and_size(const BoxState& o) const {
        return x == o.x && y == o.y && z == o.z && w == o.w && l == o.l && h == o.h &&
               theta == o.theta;
    }
};

/// Ordered sequence of states sharing one identity and category. Frames are
/// strictly increasing; gaps are permitted.
struct Tracklet {
    std::int64_t id = 0;
    std::string cls;
    std::vector<BoxState> states;  // sorted by frame, strictly increasing

    int age() const { return static_cast<int>(states.size()); }
    bool empty() const { return states.empty(); }
    int t_start() const { return states.front().frame; }
    int t_end() const { return states.back().frame; }

    /// Stored state at the given frame, or nullptr.
    const BoxState* state_at(int frame) const;

    /// True when the [t_start, t_end] spans of the two tracklets intersect.
    bool lifespan_overlaps(const Tracklet& other) const {
        if (empty() || other.empty()) return false;
        return t_start() <= other.t_end() && other.t_start() <= t_end();
    }

    /// Mean confidence over non-interpolated states (all states when none are observed).
    double mean_observed_conf() const;

    /// Inserts a state keeping frames sorted; rejects duplicate frames.
    void insert_state(BoxState s);
};

/// Per-frame ego vehicle position, used as the corner-alignment reference.
struct EgoPose {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// The finalized tracklet set produced by one upstream tracker for one scene.
struct TrackerOutput {
    std::string source_name;
    std::string scene_id;
    int scene_length = 0;  // frames, states live in [0, scene_length)
    double frame_rate = 0.0;  // Hz
    std::vector<Tracklet> tracklets;
    std::vector<EgoPose> ego;  // empty, or one entry per frame
};

/// Scene frame/time bookkeeping shared by the pipeline stages.
struct SceneContext {
    int scene_length = 0;
    double frame_rate = 0.0;

    double dt() const { return 1.0 / frame_rate; }
    double frames_to_seconds(int frames) const { return frames / frame_rate; }
};

/// Monotone source of fresh tracklet identities.
class IdAllocator {
public:
    explicit IdAllocator(std::int64_t first = 1) : next_(first) {}
    std::int64_t fresh() { return next_++; }

    /// Starts numbering above every id already present in the inputs.
    static IdAllocator above(const std::vector<TrackerOutput>& inputs);

private:
    std::int64_t next_;
};

}  // namespace retrack
