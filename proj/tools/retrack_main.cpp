// retrack: offline refinement of 3D multi-object tracking results.
//
// Subcommands:
//   run       refine one or more tracker outputs into a single result
//   synth     generate a synthetic scene and corrupted tracker outputs
//   score     compare a result against ground truth
//   validate  check a track file's structural invariants
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "retrack/pipeline.hpp"
#include "retrack/synth.hpp"
#include "retrack/trackfile.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// One NDJSON stream per stage under the trace directory.
class TraceWriter {
public:
    explicit TraceWriter(const std::string& dir) : dir_(dir) {
        std::filesystem::create_directories(dir);
        hooks_.on_merge = [this](const retrack::MergeEvent& e) {
            write("stwo_merges", {{"frame", e.frame},
                                  {"id_a", e.id_a},
                                  {"id_b", e.id_b},
                                  {"cost", e.cost},
                                  {"new_id", e.new_id}});
        };
        hooks_.on_split = [this](const retrack::SplitEvent& e) {
            write("stw_splits", {{"source_id", e.source_id},
                                 {"new_id", e.new_id},
                                 {"t_start", e.t_start},
                                 {"t_end", e.t_end}});
        };
        hooks_.on_entangle = [this](const retrack::EntangleEvent& e) {
            write("stw_entangled", {{"frame", e.frame},
                                    {"member_ids", e.member_ids},
                                    {"new_id", e.new_id}});
        };
        hooks_.on_cluster = [this](const retrack::ClusterEvent& e) {
            json members = json::array();
            for (const auto& [source, id] : e.members)
                members.push_back({{"source", source}, {"id", id}});
            write("mtm_clusters", {{"fused_id", e.fused_id}, {"members", members}});
        };
        hooks_.on_refine_warning = [this](const retrack::RefineWarningEvent& e) {
            write("refine_warnings",
                  {{"id", e.id}, {"frame", e.frame}, {"reason", e.reason}});
        };
    }

    const retrack::PipelineHooks* hooks() const { return &hooks_; }

private:
    void write(const std::string& stream, const json& record) {
        auto it = streams_.find(stream);
        if (it == streams_.end()) {
            auto file = std::make_unique<std::ofstream>(dir_ + "/" + stream + ".ndjson");
            it = streams_.emplace(stream, std::move(file)).first;
        }
        *it->second << record.dump() << "\n";
    }

    std::string dir_;
    std::map<std::string, std::unique_ptr<std::ofstream>> streams_;
    retrack::PipelineHooks hooks_;
};

int cmd_run(const std::vector<std::string>& inputs, const std::string& config_path,
            const std::string& output_path, const std::string& trace_dir,
            const retrack::PipelineConfig& toggles_base, bool have_config) {
    retrack::PipelineConfig cfg = toggles_base;
    if (have_config) {
        // Stage toggles from the command line must win over the file.
        const retrack::PipelineConfig from_file = retrack::read_config_file(config_path);
        retrack::PipelineConfig merged = from_file;
        merged.enable_preprocess = from_file.enable_preprocess && toggles_base.enable_preprocess;
        merged.enable_stwo = from_file.enable_stwo && toggles_base.enable_stwo;
        merged.enable_stw = from_file.enable_stw && toggles_base.enable_stw;
        merged.enable_mtm = from_file.enable_mtm && toggles_base.enable_mtm;
        merged.enable_global_refine =
            from_file.enable_global_refine && toggles_base.enable_global_refine;
        merged.enable_local_refine =
            from_file.enable_local_refine && toggles_base.enable_local_refine;
        cfg = merged;
    }

    std::vector<retrack::TrackerOutput> sources;
    for (const auto& path : inputs) sources.push_back(retrack::read_track_file(path).output);

    std::optional<TraceWriter> tracer;
    if (!trace_dir.empty()) tracer.emplace(trace_dir);

    const retrack::TrackerOutput result =
        retrack::run_pipeline(sources, cfg, tracer ? tracer->hooks() : nullptr);
    retrack::write_track_file(retrack::TrackFile::from_output(result), output_path);
    std::cout << "wrote " << output_path << " (" << result.tracklets.size()
              << " tracklets)\n";
    return kExitOk;
}

json metrics_to_json(const retrack::synth::Metrics& m) {
    return {{"gt_states", m.gt_states}, {"pred_states", m.pred_states},
            {"matches", m.matches},     {"fp", m.fp},
            {"fn", m.fn},               {"ids", m.ids},
            {"score", m.score},         {"fragment_recovery", m.fragment_recovery}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Offline refinement of 3D multi-object tracking results"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Refine tracker outputs");
    std::vector<std::string> run_inputs;
    std::string run_config, run_output, run_trace;
    run->add_option("--input", run_inputs, "Input track file (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--config", run_config, "Pipeline config JSON")->check(CLI::ExistingFile);
    run->add_option("--output", run_output, "Output track file")->required();
    run->add_option("--trace", run_trace, "Directory for per-stage trace streams");
    bool no_preprocess = false, no_stwo = false, no_stw = false, no_mtm = false;
    bool no_global = false, no_local = false;
    run->add_flag("--no-preprocess", no_preprocess, "Disable tracklet filtering");
    run->add_flag("--no-stwo", no_stwo, "Disable fragment re-identification");
    run->add_flag("--no-stw", no_stw, "Disable overlap disentangling");
    run->add_flag("--no-mtm", no_mtm, "Disable multi-tracker fusion");
    run->add_flag("--no-global-refine", no_global, "Disable size/corner refinement");
    run->add_flag("--no-local-refine", no_local, "Disable window refinement");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic scenes");
    std::uint64_t seed = 1;
    int objects = 10, frames = 40, crossings = 0, ghosts = 0, fragments = 0, id_swaps = 0;
    double rate = 2.0, pos_noise = 0.0, size_noise = 0.0, theta_noise = 0.0, dropout = 0.0;
    std::string gt_path;
    std::vector<std::string> out_paths;
    bool no_ego = false;
    synth_cmd->add_option("--seed", seed, "Generator seed");
    synth_cmd->add_option("--objects", objects, "Number of objects");
    synth_cmd->add_option("--frames", frames, "Scene length in frames");
    synth_cmd->add_option("--rate", rate, "Frame rate in Hz");
    synth_cmd->add_option("--crossings", crossings, "Close-passing object pairs");
    synth_cmd->add_option("--gt", gt_path, "Ground-truth output path")->required();
    synth_cmd
        ->add_option("--out", out_paths,
                     "Corrupted tracker output path (repeatable; each gets its own seed)");
    synth_cmd->add_option("--ghosts", ghosts, "Ghost tracklets per output");
    synth_cmd->add_option("--fragments", fragments, "Fragmentation events per output");
    synth_cmd->add_option("--id-swaps", id_swaps, "Identity swaps per output");
    synth_cmd->add_option("--noise-pos", pos_noise, "Position noise sigma (m)");
    synth_cmd->add_option("--noise-size", size_noise, "Size noise sigma (m)");
    synth_cmd->add_option("--noise-theta", theta_noise, "Heading noise sigma (rad)");
    synth_cmd->add_option("--dropout", dropout, "Per-state dropout probability");
    synth_cmd->add_flag("--no-ego", no_ego, "Omit the ego track");

    // score
    auto* score_cmd = app.add_subcommand("score", "Score a result against ground truth");
    std::string pred_path, score_gt_path;
    double gate = 0.5;
    score_cmd->add_option("--pred", pred_path, "Predicted track file")
        ->required()
        ->check(CLI::ExistingFile);
    score_cmd->add_option("--gt", score_gt_path, "Ground-truth track file")
        ->required()
        ->check(CLI::ExistingFile);
    score_cmd->add_option("--gate", gate, "BEV IoU matching gate");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a track file");
    std::string validate_path;
    validate_cmd->add_option("--input", validate_path, "Track file")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error(usage): " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*run) {
            retrack::PipelineConfig toggles;
            toggles.enable_preprocess = !no_preprocess;
            toggles.enable_stwo = !no_stwo;
            toggles.enable_stw = !no_stw;
            toggles.enable_mtm = !no_mtm;
            toggles.enable_global_refine = !no_global;
            toggles.enable_local_refine = !no_local;
            return cmd_run(run_inputs, run_config, run_output, run_trace, toggles,
                           !run_config.empty());
        }
        if (*synth_cmd) {
            retrack::synth::SceneSpec spec;
            spec.n_objects = objects;
            spec.scene_length = frames;
            spec.frame_rate = rate;
            spec.crossing_pairs = crossings;
            spec.with_ego = !no_ego;
            const retrack::synth::SyntheticScene scene = retrack::synth::generate(seed, spec);
            retrack::write_track_file(retrack::TrackFile::from_output(scene.gt), gt_path);
            std::cout << "wrote " << gt_path << " (" << scene.gt.tracklets.size()
                      << " objects)\n";

            retrack::synth::CorruptionSpec corr;
            corr.ghost_count = ghosts;
            corr.fragment_events = fragments;
            corr.id_swaps = id_swaps;
            corr.pos_noise = pos_noise;
            corr.size_noise = size_noise;
            corr.theta_noise = theta_noise;
            corr.dropout = dropout;
            for (std::size_t i = 0; i < out_paths.size(); ++i) {
                auto corrupted = retrack::synth::corrupt(scene, corr, seed * 1000 + i + 1);
                corrupted.output.source_name = "synth-corrupt-" + std::to_string(i);
                retrack::write_track_file(retrack::TrackFile::from_output(corrupted.output),
                                          out_paths[i]);
                std::cout << "wrote " << out_paths[i] << " ("
                          << corrupted.output.tracklets.size() << " tracklets)\n";
            }
            return kExitOk;
        }
        if (*score_cmd) {
            const auto pred = retrack::read_track_file(pred_path).output;
            const auto gt = retrack::read_track_file(score_gt_path).output;
            const auto metrics = retrack::synth::score(pred, gt, gate);
            std::cout << metrics_to_json(metrics).dump(2) << "\n";
            return kExitOk;
        }
        if (*validate_cmd) {
            const auto file = retrack::read_track_file(validate_path);
            const auto issues = retrack::validate(file.output);
            for (const auto& issue : issues) std::cout << issue << "\n";
            if (!issues.empty()) {
                std::cerr << "error(data): " << issues.size() << " violation(s) in "
                          << validate_path << "\n";
                return kExitData;
            }
            std::cout << "ok\n";
            return kExitOk;
        }
    } catch (const retrack::ArgumentError& e) {
        std::cerr << "error(usage): " << e.what() << "\n";
        return kExitUsage;
    } catch (const retrack::DataError& e) {
        std::cerr << "error(data): " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error(internal): " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
