#include "retrack/motion.hpp"

#include <algorithm>
#include <cmath>

namespace retrack {

namespace {

constexpr double kTurnRateEps = 1e-6;

bool finite_state(const BoxState& s) {
    return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z) &&
           std::isfinite(s.w) && std::isfinite(s.l) && std::isfinite(s.h) &&
           std::isfinite(s.vx) && std::isfinite(s.vy) && std::isfinite(s.theta);
}

// Signed speed along the heading axis; negative when reversing.
double heading_speed(const BoxState& s) {
    return s.vx * std::cos(s.theta) + s.vy * std::sin(s.theta);
}

// Nearest stored states strictly before/after `frame`.
const BoxState* nearest_before(const Tracklet& trk, int frame) {
    const BoxState* best = nullptr;
    for (const auto& s : trk.states) {
        if (s.frame < frame) best = &s;
        else break;
    }
    return best;
}

const BoxState* nearest_after(const Tracklet& trk, int frame) {
    for (const auto& s : trk.states)
        if (s.frame > frame) return &s;
    return nullptr;
}

}  // namespace

MotionModel MotionModel::fit(const Tracklet& trk, int frame, MotionModelKind kind,
                             const SceneContext& ctx) {
    MotionModel m;
    m.kind = kind;
    if (kind != MotionModelKind::Ctra || trk.age() < 2) {
        m.kind = MotionModelKind::ConstantVelocity;
        return m;
    }
    // Two stored states nearest to the target frame, by frame distance.
    const BoxState* a = nullptr;
    const BoxState* b = nullptr;
    for (const auto& s : trk.states) {
        auto closer = [&](const BoxState* cur, const BoxState& cand) {
            return cur == nullptr ||
                   std::abs(cand.frame - frame) < std::abs(cur->frame - frame);
        };
        if (closer(a, s)) {
            b = a;
            a = &s;
        } else if (closer(b, s)) {
            b = &s;
        }
    }
    if (a->frame > b->frame) std::swap(a, b);
    const double dt = ctx.frames_to_seconds(b->frame - a->frame);
    if (dt <= 0.0) {
        m.kind = MotionModelKind::ConstantVelocity;
        return m;
    }
    m.turn_rate = wrap_angle(b->theta - a->theta) / dt;
    m.acceleration = (heading_speed(*b) - heading_speed(*a)) / dt;
    return m;
}

BoxState propagate(const BoxState& state, double dt, const MotionModel& model) {
    if (!finite_state(state) || !std::isfinite(dt))
        throw ArgumentError("propagate: non-finite state or dt");
    BoxState out = state;
    out.interpolated = true;
    if (model.kind == MotionModelKind::ConstantVelocity) {
        out.x = state.x + state.vx * dt;
        out.y = state.y + state.vy * dt;
        return out;
    }
    // CTRA: speed along heading with constant acceleration and turn rate.
    const double v0 = heading_speed(state);
    const double a = model.acceleration;
    const double omega = model.turn_rate;
    const double th0 = state.theta;
    const double th1 = th0 + omega * dt;
    const double v1 = v0 + a * dt;
    if (std::abs(omega) < kTurnRateEps) {
        const double ds = v0 * dt + 0.5 * a * dt * dt;
        out.x = state.x + ds * std::cos(th0);
        out.y = state.y + ds * std::sin(th0);
    } else {
        const double w2 = omega * omega;
        out.x = state.x + (v1 * omega * std::sin(th1) + a * std::cos(th1) -
                           v0 * omega * std::sin(th0) - a * std::cos(th0)) / w2;
        out.y = state.y + (-v1 * omega * std::cos(th1) + a * std::sin(th1) +
                           v0 * omega * std::cos(th0) - a * std::sin(th0)) / w2;
    }
    out.theta = wrap_angle(th1);
    out.vx = v1 * std::cos(out.theta);
    out.vy = v1 * std::sin(out.theta);
    return out;
}

std::optional<BoxState> predict_node(const Tracklet& trk, int t, double cap_seconds,
                                     MotionModelKind kind, const SceneContext& ctx) {
    if (trk.empty()) return std::nullopt;
    if (const BoxState* s = trk.state_at(t)) return *s;

    const MotionModel model = MotionModel::fit(trk, t, kind, ctx);
    if (t > trk.t_end()) {
        const double dt = ctx.frames_to_seconds(t - trk.t_end());
        if (dt > cap_seconds) return std::nullopt;
        BoxState out = propagate(trk.states.back(), dt, model);
        out.frame = t;
        return out;
    }
    if (t < trk.t_start()) {
        const double dt = ctx.frames_to_seconds(trk.t_start() - t);
        if (dt > cap_seconds) return std::nullopt;
        BoxState out = propagate(trk.states.front(), -dt, model);
        out.frame = t;
        return out;
    }

    // Interior gap: average the forward prediction from the nearest earlier
    // state and the backward prediction from the nearest later state.
    const BoxState* lo = nearest_before(trk, t);
    const BoxState* hi = nearest_after(trk, t);
    const double d_lo = ctx.frames_to_seconds(t - lo->frame);
    const double d_hi = ctx.frames_to_seconds(hi->frame - t);
    if (std::max(d_lo, d_hi) > cap_seconds) return std::nullopt;

    const BoxState fwd = propagate(*lo, d_lo, model);
    const BoxState bwd = propagate(*hi, -d_hi, model);
    BoxState out = fwd;
    out.frame = t;
    out.x = 0.5 * (fwd.x + bwd.x);
    out.y = 0.5 * (fwd.y + bwd.y);
    out.z = 0.5 * (fwd.z + bwd.z);
    out.vx = 0.5 * (fwd.vx + bwd.vx);
    out.vy = 0.5 * (fwd.vy + bwd.vy);
    out.theta = circular_mean({fwd.theta, bwd.theta}, {1.0, 1.0});
    out.conf = 0.5 * (lo->conf + hi->conf);
    // Sizes come from the nearer anchor rather than an average.
    const BoxState* nearer = (d_lo <= d_hi) ? lo : hi;
    out.w = nearer->w;
    out.l = nearer->l;
    out.h = nearer->h;

    // Keep interpolated velocity consistent with the positional gradient when
    // the averaged velocity disagrees with it badly.
    const double span = d_lo + d_hi;
    if (span > 0.0) {
        const double gx = (hi->x - lo->x) / span;
        const double gy = (hi->y - lo->y) / span;
        const double dev = std::hypot(out.vx - gx, out.vy - gy);
        if (dev > 0.5 * std::hypot(gx, gy) + 1e-9) {
            out.vx = gx;
            out.vy = gy;
        }
    }
    out.interpolated = true;
    return out;
}

}  // namespace retrack
