#include <benchmark/benchmark.h>

#include "retrack/pipeline.hpp"
#include "retrack/refine.hpp"
#include "retrack/stwo.hpp"
#include "retrack/synth.hpp"

using namespace retrack;

namespace {

struct Fixture {
    synth::SyntheticScene scene;
    TrackerOutput tracker_a;
    TrackerOutput tracker_b;
    PipelineConfig cfg;

    Fixture() {
        synth::SceneSpec spec;
        spec.n_objects = 25;
        spec.scene_length = 40;
        spec.crossing_pairs = 1;
        scene = synth::generate(99, spec);
        synth::CorruptionSpec corr;
        corr.pos_noise = 0.1;
        corr.size_noise = 0.1;
        corr.fragment_events = 4;
        corr.ghost_count = 4;
        corr.dropout = 0.05;
        tracker_a = synth::corrupt(scene, corr, 990).output;
        tracker_b = synth::corrupt(scene, corr, 991).output;
        cfg.defaults.theta_stw = 0.85;
    }
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

}  // namespace

static void FullPipelineTwoTrackers(benchmark::State& state) {
    const Fixture& f = fixture();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_pipeline({f.tracker_a, f.tracker_b}, f.cfg));
}
BENCHMARK(FullPipelineTwoTrackers)->Unit(benchmark::kMillisecond);

static void ReIdentificationPass(benchmark::State& state) {
    const Fixture& f = fixture();
    const SceneContext ctx{f.tracker_a.scene_length, f.tracker_a.frame_rate};
    for (auto _ : state) {
        IdAllocator ids(100000);
        benchmark::DoNotOptimize(stwo_pass(f.tracker_a.tracklets, f.cfg, ctx, ids));
    }
}
BENCHMARK(ReIdentificationPass)->Unit(benchmark::kMillisecond);

static void WindowRefineOneTracklet(benchmark::State& state) {
    const Fixture& f = fixture();
    const SceneContext ctx{f.scene.gt.scene_length, f.scene.gt.frame_rate};
    const Tracklet& trk = f.scene.gt.tracklets.front();
    for (auto _ : state)
        benchmark::DoNotOptimize(sliding_window_refine(trk, f.cfg, ctx));
}
BENCHMARK(WindowRefineOneTracklet)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
