// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Oracles (Monte-Carlo sampling, exhaustive matching enumeration,
// Floyd-Warshall closure, normal equations) live in tests/support and stay
// independent of the library code paths they check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "builders.hpp"
#include "oracles.hpp"

#include "retrack/geometry.hpp"
#include "retrack/graph.hpp"
#include "retrack/lm.hpp"
#include "retrack/motion.hpp"
#include "retrack/pipeline.hpp"
#include "retrack/preprocess.hpp"
#include "retrack/refine.hpp"
#include "retrack/synth.hpp"
#include "retrack/trackfile.hpp"

using namespace retrack;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
    void note(const std::string& info) {
        if (detail.tellp() > 0) detail << "; ";
        detail << info;
    }
};

BoxState random_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    std::uniform_real_distribution<double> size(0.5, 5.0);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    BoxState b;
    b.x = pos(rng);
    b.y = pos(rng);
    b.z = pos(rng);
    b.w = size(rng);
    b.l = size(rng);
    b.h = size(rng);
    b.theta = angle(rng);
    b.cls = "car";
    b.conf = 1.0;
    return b;
}

// ---------------------------------------------------------------- C1
Outcome c1_geometry_oracle() {
    Outcome out;
    const double t0 = now_seconds();
    std::mt19937_64 rng(20250801);

    // Pair generation is sequential; each pair's sampling oracle has its own
    // seed, so spreading the work over threads changes nothing.
    std::vector<std::pair<BoxState, BoxState>> pairs;
    pairs.reserve(1000);
    for (int i = 0; i < 1000; ++i) {
        const BoxState a = random_box(rng);
        const BoxState b = random_box(rng);
        pairs.emplace_back(a, b);
    }
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<double>> chunks;
    const std::size_t stride = (pairs.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < pairs.size(); begin += stride) {
        const std::size_t end = std::min(begin + stride, pairs.size());
        chunks.push_back(std::async(std::launch::async, [&pairs, begin, end] {
            double worst_chunk = 0.0;
            for (std::size_t i = begin; i < end; ++i) {
                const double got = bev_iou(pairs[i].first, pairs[i].second);
                const double mc = oracles::mc_bev_iou(pairs[i].first, pairs[i].second,
                                                      1000000, 40000 + i);
                worst_chunk = std::max(worst_chunk, std::abs(got - mc));
            }
            return worst_chunk;
        }));
    }
    double worst = 0.0;
    for (auto& c : chunks) worst = std::max(worst, c.get());
    out.require(worst <= 0.01, "clipping vs monte-carlo off by " + std::to_string(worst));
    out.note("max |clip - mc| = " + std::to_string(worst));

    // Axis-aligned pairs against the analytic overlap.
    double worst_aa = 0.0;
    for (int i = 0; i < 200; ++i) {
        BoxState a = random_box(rng);
        BoxState b = random_box(rng);
        a.theta = 0.0;
        b.theta = 0.0;
        const double ox = std::max(
            0.0, std::min(a.x + a.l / 2, b.x + b.l / 2) - std::max(a.x - a.l / 2, b.x - b.l / 2));
        const double oy = std::max(
            0.0, std::min(a.y + a.w / 2, b.y + b.w / 2) - std::max(a.y - a.w / 2, b.y - b.w / 2));
        const double inter = ox * oy;
        const double expected = inter / (a.w * a.l + b.w * b.l - inter);
        worst_aa = std::max(worst_aa, std::abs(bev_iou(a, b) - expected));
    }
    out.require(worst_aa < 1e-9, "axis-aligned error " + std::to_string(worst_aa));

    const double elapsed = now_seconds() - t0;
    out.note("runtime " + std::to_string(elapsed) + " s");
    out.require(elapsed < 60.0, "runtime over budget");
    return out;
}

// ---------------------------------------------------------------- C2
Outcome c2_matching_oracle() {
    Outcome out;
    const double t0 = now_seconds();
    std::mt19937_64 rng(20250802);
    std::uniform_int_distribution<int> nd(2, 10);
    std::uniform_real_distribution<double> wd(0.05, 1.0);
    std::uniform_real_distribution<double> pd(0.0, 1.0);

    for (int trial = 0; trial < 600; ++trial) {
        WeightedGraph g;
        g.n = nd(rng);
        const double density = 0.15 + 0.8 * pd(rng);
        for (int i = 0; i < g.n; ++i)
            for (int j = i + 1; j < g.n; ++j)
                if (pd(rng) < density) g.edges.push_back({i, j, wd(rng)});

        const auto pairs = max_weight_matching(g);
        double got = 0.0;
        for (const auto& [i, j] : pairs)
            for (const auto& e : g.edges)
                if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) {
                    got += e.weight;
                    break;
                }
        const double want = oracles::brute_force_matching_weight(g.n, g.edges);
        if (std::abs(got - want) > 1e-9) {
            out.require(false, "graph " + std::to_string(trial) + ": got " +
                                   std::to_string(got) + " want " + std::to_string(want));
            break;
        }
    }
    const double elapsed = now_seconds() - t0;
    out.note("600 graphs, runtime " + std::to_string(elapsed) + " s");
    out.require(elapsed < 60.0, "runtime over budget");
    return out;
}

// ---------------------------------------------------------------- C3
Outcome c3_clustering_oracle() {
    Outcome out;
    std::mt19937_64 rng(20250803);
    std::uniform_int_distribution<int> nd(1, 12);
    std::uniform_real_distribution<double> pd(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = nd(rng);
        BinaryAdjacency adj(n);
        const double density = pd(rng) * 0.5;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (pd(rng) < density) adj.connect(i, j);
        if (connected_components(adj) != oracles::closure_components(adj)) {
            out.require(false, "mismatch on graph " + std::to_string(trial));
            break;
        }
    }
    out.note("500 adjacency matrices");
    return out;
}

// ---------------------------------------------------------------- C4
Outcome c4_lm_correctness() {
    Outcome out;
    std::mt19937_64 rng(20250804);
    std::uniform_real_distribution<double> ud(-2.0, 2.0);

    // Random overdetermined linear systems vs normal equations (Gaussian
    // elimination implemented here, independent of the solver).
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 3;
        const int m = n + 2 + trial % 4;
        std::vector<std::vector<double>> a(m, std::vector<double>(n));
        std::vector<double> b(m);
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < n; ++c) a[r][c] = ud(rng);
            b[r] = ud(rng);
        }
        // Normal equations A^T A x = A^T b.
        std::vector<std::vector<double>> ata(n, std::vector<double>(n, 0.0));
        std::vector<double> atb(n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                for (int r = 0; r < m; ++r) ata[i][j] += a[r][i] * a[r][j];
            for (int r = 0; r < m; ++r) atb[i] += a[r][i] * b[r];
        }
        for (int col = 0; col < n; ++col) {  // partial-pivot elimination
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs(ata[r][col]) > std::abs(ata[piv][col])) piv = r;
            std::swap(ata[col], ata[piv]);
            std::swap(atb[col], atb[piv]);
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                const double f = ata[r][col] / ata[col][col];
                for (int c2 = col; c2 < n; ++c2) ata[r][c2] -= f * ata[col][c2];
                atb[r] -= f * atb[col];
            }
        }
        std::vector<double> want(n);
        for (int i = 0; i < n; ++i) want[i] = atb[i] / ata[i][i];

        const ResidualFn fn = [&](const std::vector<double>& x) {
            std::vector<double> r(m, 0.0);
            for (int rr = 0; rr < m; ++rr) {
                for (int c = 0; c < n; ++c) r[rr] += a[rr][c] * x[c];
                r[rr] -= b[rr];
            }
            return r;
        };
        const LmResult res = lm_minimize(fn, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) {
            if (std::abs(res.x[i] - want[i]) > 1e-6) {
                out.require(false, "linear trial " + std::to_string(trial) + " coord " +
                                       std::to_string(i));
                break;
            }
        }
        if (!out.pass) break;
    }

    // Rosenbrock from the standard start point.
    const ResidualFn rosenbrock = [](const std::vector<double>& x) {
        return std::vector<double>{10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]};
    };
    const LmResult ros = lm_minimize(rosenbrock, {-1.2, 1.0});
    out.require(std::abs(ros.x[0] - 1.0) < 1e-6 && std::abs(ros.x[1] - 1.0) < 1e-6,
                "rosenbrock did not reach (1,1)");

    // Forward vs central Jacobians on the acceptance residual functions.
    const std::vector<std::pair<ResidualFn, std::vector<double>>> probes = {
        {rosenbrock, {-1.2, 1.0}},
        {rosenbrock, {0.4, -0.3}},
        {[](const std::vector<double>& x) {
             return std::vector<double>{std::sin(x[0]) + x[1] * x[1],
                                        std::exp(0.3 * x[0]) - x[1], x[0] * x[1]};
         },
         {0.7, 1.1}},
    };
    for (const auto& [fn, x] : probes) {
        const auto fwd = forward_jacobian(fn, x);
        const auto ctr = central_jacobian(fn, x);
        for (std::size_t r = 0; r < fwd.size(); ++r)
            for (std::size_t c = 0; c < fwd[r].size(); ++c) {
                const double scale = std::max(std::abs(ctr[r][c]), 1.0);
                out.require(std::abs(fwd[r][c] - ctr[r][c]) / scale < 1e-4,
                            "jacobian mismatch");
            }
    }
    return out;
}

// ---------------------------------------------------------------- C5
Outcome c5_prediction_fidelity() {
    Outcome out;
    const SceneContext ctx{40, 2.0};
    std::mt19937_64 rng(20250805);
    std::uniform_real_distribution<double> pos(-40.0, 40.0);
    std::uniform_real_distribution<double> vel(-8.0, 8.0);
    std::uniform_real_distribution<double> dts(0.05, 3.0);

    double worst_interp = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Tracklet full =
            builders::cv_tracklet(1, pos(rng), pos(rng), vel(rng), vel(rng), 0, 40, 2.0);
        Tracklet gappy = full;
        std::set<int> removed;
        for (int k = 0; k < 8; ++k)
            removed.insert(2 + static_cast<int>(36 * std::uniform_real_distribution<double>(
                                                         0.0, 1.0)(rng)));
        std::erase_if(gappy.states,
                      [&](const BoxState& s) { return removed.count(s.frame) > 0; });
        for (const int t : removed) {
            const auto node =
                predict_node(gappy, t, 100.0, MotionModelKind::ConstantVelocity, ctx);
            if (!node) continue;
            const double err = std::hypot(node->x - full.states[t].x,
                                          node->y - full.states[t].y);
            worst_interp = std::max(worst_interp, err);
        }
    }
    out.require(worst_interp < 1e-9,
                "interior interpolation error " + std::to_string(worst_interp));

    double worst_round = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        BoxState s = random_box(rng);
        s.vx = vel(rng);
        s.vy = vel(rng);
        const double dt = dts(rng);
        const BoxState fwd = propagate(s, dt, MotionModel::constant_velocity());
        const BoxState back = propagate(fwd, -dt, MotionModel::constant_velocity());
        worst_round = std::max({worst_round, std::abs(back.x - s.x), std::abs(back.y - s.y)});
    }
    out.require(worst_round < 1e-12, "round-trip error " + std::to_string(worst_round));
    out.note("interp err " + std::to_string(worst_interp) + ", round-trip err " +
             std::to_string(worst_round));
    return out;
}

// ---------------------------------------------------------------- C6
Outcome c6_ghost_removal() {
    Outcome out;
    int ghosts_total = 0, ghosts_left = 0, real_total = 0, real_removed = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        synth::SceneSpec spec;
        spec.n_objects = 8 + static_cast<int>(seed % 9);
        const auto scene = synth::generate(600 + seed, spec);
        synth::CorruptionSpec corr;
        corr.ghost_count = 5 + static_cast<int>(seed % 6);
        corr.fragment_events = 2;
        corr.pos_noise = 0.05;
        const auto corrupted = synth::corrupt(scene, corr, 6000 + seed);

        PipelineConfig cfg;
        const TrackerOutput filtered = filter_tracklets(corrupted.output, cfg);
        std::set<std::int64_t> surviving;
        for (const auto& trk : filtered.tracklets) surviving.insert(trk.id);

        for (const auto& [id, origin] : corrupted.provenance) {
            if (origin == synth::kGhost) {
                ++ghosts_total;
                if (surviving.count(id)) ++ghosts_left;
            } else {
                ++real_total;
                if (!surviving.count(id)) ++real_removed;
            }
        }
    }
    std::ostringstream info;
    info << ghosts_total << " ghosts, " << ghosts_left << " survived; " << real_total
         << " real tracklets, " << real_removed << " removed";
    out.note(info.str());
    out.require(ghosts_left == 0, "ghosts survived the filter");
    out.require(real_removed == 0, "real tracklets were removed");
    return out;
}

// ---------------------------------------------------------------- C7
Outcome c7_fragment_recovery() {
    Outcome out;
    int recovered = 0, objects = 0;
    long long ids_before = 0, ids_after = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        synth::SceneSpec spec;
        spec.n_objects = 12 + static_cast<int>(seed % 6);
        const auto scene = synth::generate(700 + seed, spec);
        synth::CorruptionSpec corr;
        corr.fragment_events = 5;
        corr.min_gap_frames = 1;
        corr.max_gap_frames = 2;  // at most one second at 2 Hz
        corr.pos_noise = 0.1;
        const auto corrupted = synth::corrupt(scene, corr, 7000 + seed);

        PipelineConfig cfg;
        cfg.enable_stw = false;
        cfg.enable_mtm = false;
        cfg.enable_global_refine = false;
        cfg.enable_local_refine = false;
        const TrackerOutput refined = run_pipeline({corrupted.output}, cfg);

        const auto before = synth::score(corrupted.output, scene.gt);
        const auto after = synth::score(refined, scene.gt);
        ids_before += before.ids;
        ids_after += after.ids;
        objects += static_cast<int>(scene.gt.tracklets.size());
        recovered += static_cast<int>(
            std::lround(after.fragment_recovery * scene.gt.tracklets.size()));
    }
    const double recovery = static_cast<double>(recovered) / objects;
    std::ostringstream info;
    info << "recovery " << recovery << " (" << recovered << "/" << objects << "), ids "
         << ids_before << " -> " << ids_after;
    out.note(info.str());
    out.require(recovery >= 0.95, "fragment recovery below 0.95");
    out.require(ids_after * 5 <= ids_before, "identity switches not reduced by 80%");
    return out;
}

// ---------------------------------------------------------------- C8
Outcome c8_disentangling() {
    Outcome out;
    long long swaps = 0, ids_after = 0;
    int fp_regressions = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        synth::SceneSpec spec;
        spec.n_objects = 10;
        spec.crossing_pairs = 2;
        const auto scene = synth::generate(800 + seed, spec);
        synth::CorruptionSpec corr;
        corr.id_swaps = 2;
        corr.pos_noise = 0.05;
        const auto corrupted = synth::corrupt(scene, corr, 8000 + seed);
        if (corrupted.applied_swaps == 0) continue;

        PipelineConfig cfg;
        cfg.defaults.theta_stw = 0.85;  // mid-angle crossings peak below the default
        cfg.enable_mtm = false;
        cfg.enable_global_refine = false;
        cfg.enable_local_refine = false;
        const TrackerOutput refined = run_pipeline({corrupted.output}, cfg);

        const auto before = synth::score(corrupted.output, scene.gt);
        const auto after = synth::score(refined, scene.gt);
        swaps += corrupted.applied_swaps;
        ids_after += after.ids;
        if (after.fp > before.fp) ++fp_regressions;
    }
    std::ostringstream info;
    info << swaps << " injected merges, " << ids_after << " residual switches, "
         << fp_regressions << " fp regressions";
    out.note(info.str());
    out.require(swaps > 0, "no merges were injected");
    out.require(ids_after * 5 <= swaps, "identity switches above 20% of merges");
    out.require(fp_regressions == 0, "new false positives introduced");
    return out;
}

// ---------------------------------------------------------------- C9
namespace lanes {

// Well-separated parallel objects: immune to incidental overlaps, so fusion
// effects are isolated.
TrackerOutput make(int n_objects, int frames) {
    std::vector<Tracklet> tracks;
    for (int i = 0; i < n_objects; ++i)
        tracks.push_back(builders::cv_tracklet(i + 1, -30.0 + i, 20.0 * i, 4.0 + 0.2 * i,
                                               0.0, 0, frames, 2.0));
    TrackerOutput out = builders::scene(std::move(tracks), frames, 2.0, "lanes");
    return out;
}

TrackerOutput drop_frames(const TrackerOutput& in, int phase) {
    TrackerOutput out = in;
    for (auto& trk : out.tracklets)
        std::erase_if(trk.states,
                      [&](const BoxState& s) { return s.frame % 4 == phase; });
    return out;
}

}  // namespace lanes

Outcome c9_mtm_fusion() {
    Outcome out;
    PipelineConfig cfg;
    cfg.enable_preprocess = false;
    cfg.enable_stwo = false;
    cfg.enable_stw = false;
    cfg.enable_global_refine = false;
    cfg.enable_local_refine = false;

    const TrackerOutput gt = lanes::make(12, 40);
    const TrackerOutput in1 = lanes::drop_frames(gt, 0);
    const TrackerOutput in2 = lanes::drop_frames(gt, 2);

    const TrackerOutput fused = run_pipeline({in1, in2}, cfg);
    const auto cov1 = synth::coverage_by_object(in1, gt);
    const auto cov2 = synth::coverage_by_object(in2, gt);
    const auto covf = synth::coverage_by_object(fused, gt);
    for (const auto& trk : gt.tracklets) {
        const int want = std::max(cov1.at(trk.id), cov2.at(trk.id));
        if (covf.at(trk.id) < want) {
            out.require(false, "object " + std::to_string(trk.id) + " coverage " +
                                   std::to_string(covf.at(trk.id)) + " < " +
                                   std::to_string(want));
        }
    }
    out.note("coverage preserved on " + std::to_string(gt.tracklets.size()) + " objects");

    // Fusing identical copies is the identity.
    const TrackerOutput id3 = run_pipeline({gt, gt, gt}, cfg);
    out.require(id3.tracklets.size() == gt.tracklets.size(), "identity changed count");
    double worst = 0.0;
    for (const auto& trk : gt.tracklets) {
        const Tracklet* match = nullptr;
        for (const auto& cand : id3.tracklets) {
            if (cand.t_start() == trk.t_start() &&
                std::abs(cand.states[0].x - trk.states[0].x) < 1e-6 &&
                std::abs(cand.states[0].y - trk.states[0].y) < 1e-6) {
                match = &cand;
                break;
            }
        }
        if (!match) {
            out.require(false, "identity lost a tracklet");
            continue;
        }
        for (int i = 0; i < trk.age(); ++i) {
            worst = std::max({worst, std::abs(match->states[i].x - trk.states[i].x),
                              std::abs(match->states[i].y - trk.states[i].y),
                              std::abs(match->states[i].theta - trk.states[i].theta)});
        }
    }
    out.note("identity deviation " + std::to_string(worst));
    out.require(worst < 1e-12, "identity deviation above 1e-12");
    return out;
}

// ---------------------------------------------------------------- C10
Outcome c10_refinement() {
    Outcome out;
    const SceneContext ctx{40, 2.0};
    PipelineConfig cfg;

    std::mt19937_64 rng(20250810);
    std::uniform_real_distribution<double> pos(-30.0, 30.0);
    std::uniform_real_distribution<double> vel(-8.0, 8.0);
    std::normal_distribution<double> noise(0.0, 0.2);

    double sq_before = 0.0, sq_after = 0.0;
    long long count = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Tracklet gt =
            builders::cv_tracklet(1, pos(rng), pos(rng), vel(rng), vel(rng), 0, 40, 2.0);
        Tracklet noisy = gt;
        for (auto& s : noisy.states) {
            s.x += noise(rng);
            s.y += noise(rng);
        }
        const Tracklet refined = sliding_window_refine(noisy, cfg, ctx);
        for (int i = 0; i < gt.age(); ++i) {
            sq_before += std::pow(noisy.states[i].x - gt.states[i].x, 2) +
                         std::pow(noisy.states[i].y - gt.states[i].y, 2);
            sq_after += std::pow(refined.states[i].x - gt.states[i].x, 2) +
                        std::pow(refined.states[i].y - gt.states[i].y, 2);
            ++count;
        }
    }
    const double rmse_before = std::sqrt(sq_before / count);
    const double rmse_after = std::sqrt(sq_after / count);
    std::ostringstream info;
    info << "rmse " << rmse_before << " -> " << rmse_after;
    out.note(info.str());
    out.require(rmse_after <= 0.8 * rmse_before, "rmse not reduced by 20%");

    // Noise-free input is a fixpoint.
    double worst_fix = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const Tracklet gt =
            builders::cv_tracklet(1, pos(rng), pos(rng), vel(rng), vel(rng), 0, 40, 2.0);
        const Tracklet refined = sliding_window_refine(gt, cfg, ctx);
        for (int i = 0; i < gt.age(); ++i)
            worst_fix = std::max({worst_fix, std::abs(refined.states[i].x - gt.states[i].x),
                                  std::abs(refined.states[i].y - gt.states[i].y)});
    }
    out.require(worst_fix < 1e-6, "fixpoint deviation " + std::to_string(worst_fix));

    // Corner anchor invariance under resize.
    std::uniform_real_distribution<double> sized(1.5, 5.5);
    std::uniform_real_distribution<double> angled(-M_PI, M_PI);
    double worst_corner = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        Tracklet trk;
        trk.id = 1;
        trk.cls = "car";
        BoxState s = builders::box(pos(rng), pos(rng), angled(rng), sized(rng), sized(rng), 1.6);
        s.frame = 0;
        trk.states = {s};
        const EgoPose ego_pose{pos(rng), pos(rng), 0.0};
        const BevPolygon before = bev_polygon(s);
        int anchor = 0;
        double best = 1e300;
        for (int i = 0; i < 4; ++i) {
            const double d =
                std::hypot(before[i].x - ego_pose.x, before[i].y - ego_pose.y);
            if (d < best) {
                best = d;
                anchor = i;
            }
        }
        const Tracklet aligned =
            corner_align(trk, {ego_pose}, {sized(rng), sized(rng), 1.7});
        const BevPolygon after = bev_polygon(aligned.states[0]);
        worst_corner =
            std::max({worst_corner, std::abs(before[anchor].x - after[anchor].x),
                      std::abs(before[anchor].y - after[anchor].y)});
    }
    out.require(worst_corner < 1e-9, "corner displaced " + std::to_string(worst_corner));
    return out;
}

// ------------------------------------------------------- standard suite
struct StandardScene {
    synth::SyntheticScene scene;
    TrackerOutput tracker_a;
    TrackerOutput tracker_b;
};

const std::vector<StandardScene>& standard_suite() {
    static const std::vector<StandardScene> suite = [] {
        std::vector<StandardScene> scenes;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            synth::SceneSpec spec;
            spec.n_objects = 10 + static_cast<int>((seed * 7) % 21);  // up to 30
            spec.scene_length = 40;
            spec.frame_rate = 2.0;
            spec.crossing_pairs = 1;
            spec.ctra_fraction = 0.2;
            StandardScene s{synth::generate(1000 + seed, spec), {}, {}};
            synth::CorruptionSpec corr;
            corr.pos_noise = 0.1;
            corr.size_noise = 0.1;
            corr.fragment_events = 4;
            corr.ghost_count = 4;
            corr.dropout = 0.05;
            corr.id_swaps = 1;
            s.tracker_a = synth::corrupt(s.scene, corr, 2000 + seed).output;
            s.tracker_b = synth::corrupt(s.scene, corr, 3000 + seed).output;
            s.tracker_a.source_name = "tracker-a";
            s.tracker_b.source_name = "tracker-b";
            scenes.push_back(std::move(s));
        }
        return scenes;
    }();
    return suite;
}

PipelineConfig standard_config() {
    PipelineConfig cfg;
    cfg.defaults.theta_stw = 0.85;
    return cfg;
}

// Mean position RMSE over matched states, plus the tracking score.
struct SuiteResult {
    double score = 0.0;
    double rmse = 0.0;
    std::vector<std::string> serialized;
};

SuiteResult run_suite(const PipelineConfig& cfg) {
    SuiteResult res;
    double score_sum = 0.0;
    double sq = 0.0;
    long long matched = 0;
    for (const auto& s : standard_suite()) {
        const TrackerOutput out = run_pipeline({s.tracker_a, s.tracker_b}, cfg);
        const auto metrics = synth::score(out, s.scene.gt);
        score_sum += metrics.score;
        // Position error against gt over same-frame nearest states.
        for (const auto& gt_trk : s.scene.gt.tracklets) {
            for (const auto& gs : gt_trk.states) {
                double best = 4.0;  // meters, squared distance cap 2 m
                for (const auto& trk : out.tracklets) {
                    const BoxState* o = trk.state_at(gs.frame);
                    if (!o) continue;
                    const double d2 =
                        std::pow(o->x - gs.x, 2) + std::pow(o->y - gs.y, 2);
                    best = std::min(best, d2);
                }
                if (best < 4.0) {
                    sq += best;
                    ++matched;
                }
            }
        }
        res.serialized.push_back(TrackFile::from_output(out).serialize());
    }
    res.score = score_sum / standard_suite().size();
    res.rmse = std::sqrt(sq / std::max(1LL, matched));
    return res;
}

// ---------------------------------------------------------------- C11
Outcome c11_order_robustness() {
    Outcome out;

    PipelineConfig base = standard_config();
    PipelineConfig swapped = base;
    swapped.stw_before_stwo = true;
    const SuiteResult a = run_suite(base);
    const SuiteResult b = run_suite(swapped);
    const double rel =
        std::abs(a.score - b.score) / std::max({std::abs(a.score), std::abs(b.score), 1e-9});
    std::ostringstream info;
    info << "stwo->stw score " << a.score << ", stw->stwo " << b.score << " (rel "
         << rel << ")";
    out.require(rel < 0.02, "matching order changed the score by " + std::to_string(rel));

    PipelineConfig logo = base;
    logo.local_before_global = true;
    const SuiteResult golo = a;  // base is global-then-local
    const SuiteResult lg = run_suite(logo);
    info << "; go->lo rmse " << golo.rmse << ", lo->go rmse " << lg.rmse;
    out.note(info.str());
    out.require(golo.rmse <= lg.rmse + 1e-9,
                "global-then-local lost on rmse: " + std::to_string(golo.rmse) + " vs " +
                    std::to_string(lg.rmse));
    return out;
}

// ---------------------------------------------------------------- C12
Outcome c12_determinism() {
    Outcome out;
    const PipelineConfig cfg = standard_config();
    const SuiteResult serial_a = run_suite(cfg);
    const SuiteResult serial_b = run_suite(cfg);
    out.require(serial_a.serialized == serial_b.serialized, "serial reruns differ");

    // Scenes processed concurrently must produce the same bytes.
    std::vector<std::future<std::string>> futures;
    for (const auto& s : standard_suite()) {
        futures.push_back(std::async(std::launch::async, [&s, &cfg] {
            return TrackFile::from_output(run_pipeline({s.tracker_a, s.tracker_b}, cfg))
                .serialize();
        }));
    }
    std::vector<std::string> threaded;
    for (auto& f : futures) threaded.push_back(f.get());
    out.require(threaded == serial_a.serialized, "threaded run differs from serial");
    out.note("50 scenes, serial x2 + threaded");
    return out;
}

// ---------------------------------------------------------------- C13
Outcome c13_runtime() {
    Outcome out;
    const double t0 = now_seconds();
    const SuiteResult res = run_suite(standard_config());
    const double elapsed = now_seconds() - t0;
    std::ostringstream info;
    info << "standard suite in " << elapsed << " s (score " << res.score << ")";
    out.note(info.str());
    out.require(elapsed < 300.0, "runtime above 5 minutes");
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> criteria = {
        {1, "geometry oracle (clipping vs monte-carlo, analytic axis-aligned)", c1_geometry_oracle},
        {2, "matching oracle (blossom vs exhaustive enumeration)", c2_matching_oracle},
        {3, "clustering oracle (components vs transitive closure)", c3_clustering_oracle},
        {4, "least-squares solver correctness", c4_lm_correctness},
        {5, "bidirectional prediction fidelity", c5_prediction_fidelity},
        {6, "ghost removal precision", c6_ghost_removal},
        {7, "fragment recovery", c7_fragment_recovery},
        {8, "disentangling crossed identities", c8_disentangling},
        {9, "multi-tracker fusion coverage and identity", c9_mtm_fusion},
        {10, "refinement quality and corner invariance", c10_refinement},
        {11, "stage-order robustness", c11_order_robustness},
        {12, "bit-exact determinism incl. threading", c12_determinism},
        {13, "end-to-end runtime budget", c13_runtime},
    };

    int failures = 0;
    for (const auto& entry : criteria) {
        const double t0 = now_seconds();
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.note(std::string("exception: ") + e.what());
        }
        const double dt = now_seconds() - t0;
        std::printf("[%s] C%-2d %s (%.1f s)%s%s\n", outcome.pass ? "PASS" : "FAIL",
                    entry.id, entry.title, dt, outcome.detail.tellp() > 0 ? " -- " : "",
                    outcome.detail.str().c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
