#include <set>

#include "builders.hpp"
#include "doctest.h"
#include "retrack/pipeline.hpp"
#include "retrack/synth.hpp"
#include "retrack/trackfile.hpp"

using namespace retrack;

namespace {

PipelineConfig all_off() {
    PipelineConfig cfg;
    cfg.enable_preprocess = false;
    cfg.enable_stwo = false;
    cfg.enable_stw = false;
    cfg.enable_mtm = false;
    cfg.enable_global_refine = false;
    cfg.enable_local_refine = false;
    return cfg;
}

}  // namespace

TEST_CASE("validate flags structural problems") {
    auto good = builders::scene({builders::cv_tracklet(1, 0, 0, 2, 0, 0, 10, 2.0)}, 40, 2.0);
    CHECK(validate(good).empty());

    SUBCASE("duplicate frame") {
        auto bad = good;
        bad.tracklets[0].states[3] = bad.tracklets[0].states[2];
        const auto issues = validate(bad);
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].find("not strictly increasing") != std::string::npos);
    }
    SUBCASE("confidence out of range") {
        auto bad = good;
        bad.tracklets[0].states[0].conf = 1.2;
        const auto issues = validate(bad);
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].find("conf") != std::string::npos);
    }
    SUBCASE("duplicate ids") {
        auto bad = good;
        bad.tracklets.push_back(builders::cv_tracklet(1, 5, 5, 1, 0, 0, 5, 2.0));
        const auto issues = validate(bad);
        REQUIRE(issues.size() == 1);
        CHECK(issues[0].find("duplicate id") != std::string::npos);
    }
    SUBCASE("frame outside scene") {
        auto bad = good;
        bad.tracklets[0].states.back().frame = 44;
        CHECK_FALSE(validate(bad).empty());
    }
}

TEST_CASE("identity pipeline renumbers ids only") {
    const auto a = builders::cv_tracklet(31, 0, 0, 2, 0, 0, 10, 2.0);
    const auto b = builders::cv_tracklet(17, 0, 30, -2, 0, 5, 10, 2.0);
    const auto in = builders::scene({a, b}, 40, 2.0);
    const TrackerOutput out = run_pipeline({in}, all_off());
    REQUIRE(out.tracklets.size() == 2);
    // Canonical order: by first frame.
    CHECK(out.tracklets[0].id == 1);
    CHECK(out.tracklets[1].id == 2);
    CHECK(out.tracklets[0].age() == 10);
    CHECK(out.tracklets[1].age() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(out.tracklets[0].states[i].x == a.states[i].x);
        CHECK(out.tracklets[1].states[i].y == b.states[i].y);
    }
}

TEST_CASE("empty input set is an argument error") {
    CHECK_THROWS_AS(run_pipeline({}, all_off()), ArgumentError);
}

TEST_CASE("mismatched scene metadata is rejected") {
    const auto a = builders::scene({builders::cv_tracklet(1, 0, 0, 2, 0, 0, 10, 2.0)}, 40, 2.0);
    auto b = a;
    b.scene_length = 50;
    CHECK_THROWS_AS(run_pipeline({a, b}, all_off()), DataError);
    b = a;
    b.frame_rate = 10.0;
    CHECK_THROWS_AS(run_pipeline({a, b}, all_off()), DataError);
}

TEST_CASE("invalid inputs are rejected") {
    auto bad = builders::scene({builders::cv_tracklet(1, 0, 0, 2, 0, 0, 10, 2.0)}, 40, 2.0);
    bad.tracklets[0].states[0].conf = 7.0;
    CHECK_THROWS_AS(run_pipeline({bad}, all_off()), DataError);
}

TEST_CASE("duplicated tracker input fuses back to the single-copy count") {
    synth::SceneSpec spec;
    spec.n_objects = 9;
    const auto scene = synth::generate(301, spec);
    PipelineConfig cfg = all_off();
    cfg.enable_mtm = true;
    const TrackerOutput once = run_pipeline({scene.gt}, cfg);
    const TrackerOutput twice = run_pipeline({scene.gt, scene.gt}, cfg);
    CHECK(twice.tracklets.size() == once.tracklets.size());
}

TEST_CASE("output ids are unique and frames in range") {
    synth::SceneSpec spec;
    spec.n_objects = 8;
    spec.crossing_pairs = 1;
    const auto scene = synth::generate(303, spec);
    const auto corrupted = synth::corrupt(scene, {}, 304);
    PipelineConfig cfg;
    const TrackerOutput out = run_pipeline({corrupted.output}, cfg);
    CHECK(validate(out).empty());
    std::set<std::int64_t> ids;
    for (const auto& trk : out.tracklets) CHECK(ids.insert(trk.id).second);
    CHECK(*ids.begin() == 1);
    CHECK(*ids.rbegin() == static_cast<std::int64_t>(out.tracklets.size()));
}

TEST_CASE("pipeline output is bit-identical across runs") {
    synth::SceneSpec spec;
    spec.n_objects = 12;
    spec.crossing_pairs = 1;
    const auto scene = synth::generate(305, spec);
    synth::CorruptionSpec corr;
    corr.pos_noise = 0.1;
    corr.fragment_events = 3;
    corr.ghost_count = 3;
    const auto t1 = synth::corrupt(scene, corr, 306);
    const auto t2 = synth::corrupt(scene, corr, 307);
    PipelineConfig cfg;

    const std::string s1 =
        TrackFile::from_output(run_pipeline({t1.output, t2.output}, cfg)).serialize();
    const std::string s2 =
        TrackFile::from_output(run_pipeline({t1.output, t2.output}, cfg)).serialize();
    CHECK(s1 == s2);
}

TEST_CASE("different categories never merge or fuse") {
    // A car and a pedestrian share the same path; association costs across
    // categories are infinite, so every stage must keep them apart.
    Tracklet car = builders::cv_tracklet(1, 0, 0, 2, 0, 0, 20, 2.0, "car");
    Tracklet ped = builders::cv_tracklet(2, 0, 0, 2, 0, 0, 20, 2.0, "pedestrian", 0.7, 0.7, 1.7);
    PipelineConfig cfg;
    cfg.categories["pedestrian"] = cfg.defaults;
    cfg.categories["pedestrian"].rigid = false;
    const TrackerOutput out =
        run_pipeline({builders::scene({car, ped}, 40, 2.0)}, cfg);
    REQUIRE(out.tracklets.size() == 2);
    std::set<std::string> classes;
    for (const auto& trk : out.tracklets) {
        classes.insert(trk.cls);
        CHECK(trk.age() == 20);
    }
    CHECK(classes == std::set<std::string>{"car", "pedestrian"});
}

TEST_CASE("refined output can cascade back through the pipeline") {
    synth::SceneSpec spec;
    spec.n_objects = 8;
    const auto scene = synth::generate(313, spec);
    synth::CorruptionSpec corr;
    corr.pos_noise = 0.1;
    corr.fragment_events = 2;
    const auto corrupted = synth::corrupt(scene, corr, 314);
    PipelineConfig cfg;
    const TrackerOutput once = run_pipeline({corrupted.output}, cfg);
    CHECK(validate(once).empty());
    const TrackerOutput twice = run_pipeline({once}, cfg);
    CHECK(validate(twice).empty());
    CHECK(twice.tracklets.size() == once.tracklets.size());
}

TEST_CASE("ego from any input reaches the output") {
    synth::SceneSpec spec;
    spec.n_objects = 4;
    const auto scene = synth::generate(311, spec);
    auto no_ego = scene.gt;
    no_ego.ego.clear();
    PipelineConfig cfg = all_off();
    const TrackerOutput out = run_pipeline({no_ego, scene.gt}, cfg);
    CHECK(out.ego.size() == scene.gt.ego.size());
}
