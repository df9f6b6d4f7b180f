#include "retrack/trackfile.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace retrack {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "trackfile/1";

const char* kHeaderKeys[] = {"format", "scene_id", "scene_length", "frame_rate",
                             "source_name", "ego", "states"};
const char* kStateKeys[] = {"frame", "id", "cls", "x", "y", "z", "w", "l", "h",
                            "vx", "vy", "theta", "conf", "interpolated"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw DataError(where + ": " + what);
}

double require_number(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing required field '") + key + "'");
    if (!it->is_number()) fail(where, std::string("field '") + key + "' must be a number");
    return it->get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing required field '") + key + "'");
    if (!it->is_string()) fail(where, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TrackFile TrackFile::parse(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("track file: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw DataError("track file: top-level value must be an object");

    TrackFile tf;
    TrackerOutput& out = tf.output;
    out.scene_id = require_string(doc, "scene_id", "header");
    out.source_name = require_string(doc, "source_name", "header");
    out.scene_length = static_cast<int>(require_number(doc, "scene_length", "header"));
    out.frame_rate = require_number(doc, "frame_rate", "header");
    if (out.scene_length <= 0) fail("header", "scene_length must be > 0");
    if (!(out.frame_rate > 0.0)) fail("header", "frame_rate must be > 0");

    if (auto it = doc.find("ego"); it != doc.end()) {
        if (!it->is_array()) fail("header", "field 'ego' must be an array");
        for (const auto& entry : *it) {
            if (!entry.is_array() || entry.size() != 3)
                fail("header", "each ego entry must be [x, y, z]");
            out.ego.push_back({entry[0].get<double>(), entry[1].get<double>(),
                               entry[2].get<double>()});
        }
        if (static_cast<int>(out.ego.size()) != out.scene_length)
            fail("header", "ego track length does not match scene_length");
    }

    json extra_header = json::object();
    for (const auto& [key, value] : doc.items()) {
        if (std::find(std::begin(kHeaderKeys), std::end(kHeaderKeys), key) ==
            std::end(kHeaderKeys))
            extra_header[key] = value;
    }
    tf.extra_header = extra_header.empty() ? std::string() : extra_header.dump();

    auto states_it = doc.find("states");
    if (states_it == doc.end()) fail("header", "missing required field 'states'");
    if (!states_it->is_array()) fail("header", "field 'states' must be an array");

    std::map<std::int64_t, Tracklet> by_id;
    std::size_t index = 0;
    for (const auto& rec : *states_it) {
        std::ostringstream where;
        where << "states[" << index++ << "]";
        if (!rec.is_object()) fail(where.str(), "record must be an object");

        BoxState s;
        s.frame = static_cast<int>(require_number(rec, "frame", where.str()));
        s.id = static_cast<std::int64_t>(require_number(rec, "id", where.str()));
        s.cls = require_string(rec, "cls", where.str());
        s.x = require_number(rec, "x", where.str());
        s.y = require_number(rec, "y", where.str());
        s.z = require_number(rec, "z", where.str());
        s.w = require_number(rec, "w", where.str());
        s.l = require_number(rec, "l", where.str());
        s.h = require_number(rec, "h", where.str());
        s.vx = require_number(rec, "vx", where.str());
        s.vy = require_number(rec, "vy", where.str());
        s.theta = require_number(rec, "theta", where.str());
        s.conf = require_number(rec, "conf", where.str());
        if (auto it = rec.find("interpolated"); it != rec.end()) {
            if (!it->is_boolean()) fail(where.str(), "field 'interpolated' must be a boolean");
            s.interpolated = it->get<bool>();
        }

        json extras = json::object();
        for (const auto& [key, value] : rec.items()) {
            if (std::find(std::begin(kStateKeys), std::end(kStateKeys), key) ==
                std::end(kStateKeys))
                extras[key] = value;
        }
        if (!extras.empty()) tf.extra_records[{s.id, s.frame}] = extras.dump();

        Tracklet& trk = by_id[s.id];
        if (trk.states.empty()) {
            trk.id = s.id;
            trk.cls = s.cls;
        } else if (trk.cls != s.cls) {
            fail(where.str(), "cls mismatch within id " + std::to_string(s.id));
        }
        if (trk.state_at(s.frame)) {
            fail(where.str(), "duplicate (id, frame) = (" + std::to_string(s.id) + ", " +
                                  std::to_string(s.frame) + ")");
        }
        trk.insert_state(std::move(s));
    }
    for (auto& [id, trk] : by_id) out.tracklets.push_back(std::move(trk));
    return tf;
}

TrackFile TrackFile::from_output(const TrackerOutput& out) {
    TrackFile tf;
    tf.output = out;
    return tf;
}

std::string TrackFile::serialize() const {
    json doc;
    doc["format"] = kFormatTag;
    doc["scene_id"] = output.scene_id;
    doc["source_name"] = output.source_name;
    doc["scene_length"] = output.scene_length;
    doc["frame_rate"] = output.frame_rate;
    if (!output.ego.empty()) {
        json ego = json::array();
        for (const auto& e : output.ego) ego.push_back({e.x, e.y, e.z});
        doc["ego"] = ego;
    }
    if (!extra_header.empty()) {
        const json extras = json::parse(extra_header);
        for (const auto& [key, value] : extras.items()) doc[key] = value;
    }

    // Canonical record order: sorted by (id, frame).
    std::vector<const BoxState*> records;
    for (const auto& trk : output.tracklets)
        for (const auto& s : trk.states) records.push_back(&s);
    std::sort(records.begin(), records.end(), [](const BoxState* a, const BoxState* b) {
        return a->id < b->id || (a->id == b->id && a->frame < b->frame);
    });

    json states = json::array();
    for (const BoxState* s : records) {
        json rec;
        rec["frame"] = s->frame;
        rec["id"] = s->id;
        rec["cls"] = s->cls;
        rec["x"] = s->x;
        rec["y"] = s->y;
        rec["z"] = s->z;
        rec["w"] = s->w;
        rec["l"] = s->l;
        rec["h"] = s->h;
        rec["vx"] = s->vx;
        rec["vy"] = s->vy;
        rec["theta"] = s->theta;
        rec["conf"] = s->conf;
        rec["interpolated"] = s->interpolated;
        if (auto it = extra_records.find({s->id, s->frame}); it != extra_records.end()) {
            const json extras = json::parse(it->second);
            for (const auto& [key, value] : extras.items()) rec[key] = value;
        }
        states.push_back(std::move(rec));
    }
    doc["states"] = std::move(states);
    return doc.dump(2) + "\n";
}

TrackFile read_track_file(const std::string& path) {
    try {
        return TrackFile::parse(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_track_file(const TrackFile& file, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << file.serialize();
}

namespace {

Metric parse_metric(const json& v, const std::string& where) {
    const std::string s = v.get<std::string>();
    if (s == "iou_bev") return Metric::IouBev;
    if (s == "iou_3d") return Metric::Iou3d;
    if (s == "giou_3d") return Metric::GIou3d;
    fail(where, "unknown metric '" + s + "' (expected iou_bev, iou_3d or giou_3d)");
}

MotionModelKind parse_motion(const json& v, const std::string& where) {
    const std::string s = v.get<std::string>();
    if (s == "cv") return MotionModelKind::ConstantVelocity;
    if (s == "ctra") return MotionModelKind::Ctra;
    fail(where, "unknown motion_model '" + s + "' (expected cv or ctra)");
}

void apply_category(const json& obj, CategoryParams& p, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        const std::string at = where + "." + key;
        try {
            if (key == "theta_age") p.theta_age = value.get<int>();
            else if (key == "theta_score") p.theta_score = value.get<double>();
            else if (key == "theta_blo") p.theta_blo = value.get<double>();
            else if (key == "theta_multi") p.theta_multi = value.get<double>();
            else if (key == "theta_stw") p.theta_stw = value.get<double>();
            else if (key == "motion_model") p.motion_model = parse_motion(value, at);
            else if (key == "metric") p.metric = parse_metric(value, at);
            else if (key == "topk") p.topk = value.get<int>();
            else if (key == "window_halfspan") p.window_halfspan = value.get<double>();
            else if (key == "rigid") p.rigid = value.get<bool>();
            else if (key == "prediction_cap") p.prediction_cap = value.get<double>();
            else fail(at, "unknown config key");
        } catch (const json::exception&) {
            fail(at, "invalid value type");
        }
    }
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw DataError("config: top-level value must be an object");

    PipelineConfig cfg;
    // Defaults first: category entries inherit from them.
    if (auto it = doc.find("defaults"); it != doc.end())
        apply_category(*it, cfg.defaults, "defaults");
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "defaults") {
                continue;
            } else if (key == "categories") {
                for (const auto& [name, params] : value.items()) {
                    CategoryParams p = cfg.defaults;
                    apply_category(params, p, "categories." + name);
                    cfg.categories[name] = p;
                }
            } else if (key == "stages") {
                for (const auto& [stage, enabled] : value.items()) {
                    const bool on = enabled.get<bool>();
                    if (stage == "preprocess") cfg.enable_preprocess = on;
                    else if (stage == "stwo") cfg.enable_stwo = on;
                    else if (stage == "stw") cfg.enable_stw = on;
                    else if (stage == "mtm") cfg.enable_mtm = on;
                    else if (stage == "global_refine") cfg.enable_global_refine = on;
                    else if (stage == "local_refine") cfg.enable_local_refine = on;
                    else fail("stages." + stage, "unknown stage");
                }
            } else if (key == "order") {
                for (const auto& [name, v] : value.items()) {
                    if (name == "stw_before_stwo") cfg.stw_before_stwo = v.get<bool>();
                    else if (name == "local_before_global")
                        cfg.local_before_global = v.get<bool>();
                    else fail("order." + name, "unknown key");
                }
            } else if (key == "stwo_max_sweeps") {
                cfg.stwo_max_sweeps = value.get<int>();
            } else if (key == "matching_objective") {
                const std::string s = value.get<std::string>();
                if (s == "max_weight") cfg.matching_objective = MatchingObjective::MaxWeight;
                else if (s == "max_cardinality")
                    cfg.matching_objective = MatchingObjective::MaxCardinality;
                else fail("matching_objective", "expected max_weight or max_cardinality");
            } else if (key == "stw_ignore_interpolated") {
                cfg.stw_ignore_interpolated = value.get<bool>();
            } else if (key == "stw_merge_entangled_runs") {
                cfg.stw_merge_entangled_runs = value.get<bool>();
            } else if (key == "interpolated_weight") {
                cfg.interpolated_weight = value.get<double>();
            } else if (key == "enable_corner_align") {
                cfg.enable_corner_align = value.get<bool>();
            } else if (key == "refine_weights") {
                for (const auto& [name, v] : value.items()) {
                    if (name == "position") cfg.refine_weights.position = v.get<double>();
                    else if (name == "velocity") cfg.refine_weights.velocity = v.get<double>();
                    else if (name == "heading") cfg.refine_weights.heading = v.get<double>();
                    else fail("refine_weights." + name, "unknown key");
                }
            } else {
                fail(key, "unknown config key");
            }
        } catch (const json::exception&) {
            fail(key, "invalid value type");
        }
    }

    const auto issues = cfg.validate();
    if (!issues.empty()) throw DataError("config: " + issues.front());
    return cfg;
}

PipelineConfig read_config_file(const std::string& path) {
    try {
        return parse_config(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

}  // namespace retrack
