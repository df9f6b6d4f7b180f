#include "retrack/types.hpp"

#include <algorithm>

namespace retrack {

double circular_mean(const std::vector<double>& angles, const std::vector<double>& weights) {
    if (angles.empty() || angles.size() != weights.size())
        throw ArgumentError("circular_mean: angle/weight size mismatch");
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        s += weights[i] * std::sin(angles[i]);
        c += weights[i] * std::cos(angles[i]);
    }
    return wrap_angle(std::atan2(s, c));
}

const BoxState* Tracklet::state_at(int frame) const {
    auto it = std::lower_bound(states.begin(), states.end(), frame,
                               [](const BoxState& s, int f) { return s.frame < f; });
    if (it != states.end() && it->frame == frame) return &*it;
    return nullptr;
}

double Tracklet::mean_observed_conf() const {
    if (states.empty()) return 0.0;
    double sum = 0.0;
    int n = 0;
    for (const auto& s : states) {
        if (!s.interpolated) {
            sum += s.conf;
            ++n;
        }
    }
    if (n == 0) {  // fully interpolated tracklet; fall back to all states
        for (const auto& s : states) sum += s.conf;
        n = static_cast<int>(states.size());
    }
    return sum / n;
}

void Tracklet::insert_state(BoxState s) {
    auto it = std::lower_bound(states.begin(), states.end(), s.frame,
                               [](const BoxState& a, int f) { return a.frame < f; });
    if (it != states.end() && it->frame == s.frame)
        throw ArgumentError("Tracklet::insert_state: duplicate frame " + std::to_string(s.frame));
    states.insert(it, std::move(s));
}

IdAllocator IdAllocator::above(const std::vector<TrackerOutput>& inputs) {
    std::int64_t max_id = 0;
    for (const auto& in : inputs)
        for (const auto& trk : in.tracklets) max_id = std::max(max_id, trk.id);
    return IdAllocator(max_id + 1);
}

}  // namespace retrack
