#pragma once

#include <optional>

#include "retrack/config.hpp"
#include "retrack/types.hpp"

namespace retrack {

/// Explicit motion model. CTRA carries turn-rate and acceleration estimated
/// from the two nearest observed states; CV ignores both.
struct MotionModel {
    MotionModelKind kind = MotionModelKind::ConstantVelocity;
    double turn_rate = 0.0;     // rad/s
    double acceleration = 0.0;  // m/s^2

    static MotionModel constant_velocity() { return {}; }

    /// Fits CTRA parameters from the two stored states nearest to `frame`.
    /// Falls back to CV when the tracklet has fewer than two states.
    static MotionModel fit(const Tracklet& trk, int frame, MotionModelKind kind,
                           const SceneContext& ctx);
};

/// Evolves a state by dt seconds (dt may be negative). Size, confidence,
/// category and identity are copied; the result is marked interpolated.
BoxState propagate(const BoxState& state, double dt, const MotionModel& model);

/// Bidirectional node prediction. Returns the stored state when frame t is
/// present; otherwise extrapolates forward/backward from the nearest end, or
/// averages the two one-sided predictions for interior gaps. Returns nullopt
/// when the required extrapolation span exceeds cap_seconds.
std::optional<BoxState> predict_node(const Tracklet& trk, int t, double cap_seconds,
                                     MotionModelKind kind, const SceneContext& ctx);

}  // namespace retrack
