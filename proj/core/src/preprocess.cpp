#include "retrack/preprocess.hpp"

namespace retrack {

TrackerOutput filter_tracklets(const TrackerOutput& in, const PipelineConfig& cfg) {
    TrackerOutput out = in;
    out.tracklets.clear();
    for (const auto& trk : in.tracklets) {
        const CategoryParams& p = cfg.params_for(trk.cls);
        const bool ghost = trk.age() < p.theta_age && trk.mean_observed_conf() < p.theta_score;
        if (!ghost) out.tracklets.push_back(trk);
    }
    return out;
}

}  // namespace retrack
