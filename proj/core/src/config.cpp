#include "retrack/config.hpp"

#include <sstream>

namespace retrack {

const char* to_string(Metric m) {
    switch (m) {
        case Metric::IouBev: return "iou_bev";
        case Metric::Iou3d: return "iou_3d";
        case Metric::GIou3d: return "giou_3d";
    }
    return "?";
}

const char* to_string(MotionModelKind k) {
    switch (k) {
        case MotionModelKind::ConstantVelocity: return "cv";
        case MotionModelKind::Ctra: return "ctra";
    }
    return "?";
}

namespace {

void check_params(const CategoryParams& p, const std::string& prefix,
                  std::vector<std::string>& out) {
    auto bad = [&](const std::string& field, double value, const std::string& range) {
        std::ostringstream os;
        os << prefix << field << ": " << value << " out of range " << range;
        out.push_back(os.str());
    };
    if (p.theta_age < 0) bad("theta_age", p.theta_age, "[0, inf)");
    if (p.theta_score < 0.0 || p.theta_score > 1.0) bad("theta_score", p.theta_score, "[0, 1]");
    if (p.theta_blo < 0.0 || p.theta_blo > 1.0) bad("theta_blo", p.theta_blo, "[0, 1]");
    if (p.theta_multi < 0.0 || p.theta_multi > 1.0) bad("theta_multi", p.theta_multi, "[0, 1]");
    if (p.theta_stw < 0.0 || p.theta_stw > 2.0) bad("theta_stw", p.theta_stw, "[0, 2]");
    if (p.topk < 1) bad("topk", p.topk, "[1, inf)");
    if (p.window_halfspan <= 0.0 || p.window_halfspan > 4.0)
        bad("window_halfspan", p.window_halfspan, "(0, 4]");
    if (p.prediction_cap <= 0.0) bad("prediction_cap", p.prediction_cap, "(0, inf)");
}

}  // namespace

std::vector<std::string> PipelineConfig::validate() const {
    std::vector<std::string> out;
    check_params(defaults, "defaults.", out);
    for (const auto& [name, p] : categories) check_params(p, "categories." + name + ".", out);
    if (stwo_max_sweeps < 1) out.push_back("stwo_max_sweeps: must be >= 1");
    if (interpolated_weight < 0.0 || interpolated_weight > 1.0)
        out.push_back("interpolated_weight: must be in [0, 1]");
    if (refine_weights.position < 0.0 || refine_weights.velocity < 0.0 ||
        refine_weights.heading < 0.0)
        out.push_back("refine_weights: must be non-negative");
    return out;
}

}  // namespace retrack
