#include "retrack/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "retrack/geometry.hpp"
#include "retrack/motion.hpp"

namespace retrack::synth {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double gauss(Rng& rng, double sigma) {
    if (sigma <= 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, sigma)(rng);
}

BoxState make_initial_state(Rng& rng, const SceneSpec& spec, std::int64_t id) {
    BoxState s;
    s.cls = spec.cls;
    s.id = id;
    s.w = uniform(rng, 1.8, 2.1);
    s.l = uniform(rng, 4.2, 4.9);
    s.h = uniform(rng, 1.5, 1.8);
    s.z = 0.5 * s.h;
    s.conf = 1.0;
    s.theta = wrap_angle(uniform(rng, -M_PI, M_PI));
    const double speed = uniform(rng, spec.speed_min, spec.speed_max);
    s.vx = speed * std::cos(s.theta);
    s.vy = speed * std::sin(s.theta);
    s.x = uniform(rng, -spec.extent, spec.extent);
    s.y = uniform(rng, -spec.extent, spec.extent);
    return s;
}

Tracklet roll_out(const BoxState& initial, const MotionModel& model, const SceneSpec& spec,
                  std::int64_t id) {
    const double dt = 1.0 / spec.frame_rate;
    Tracklet trk;
    trk.id = id;
    trk.cls = initial.cls;
    for (int t = 0; t < spec.scene_length; ++t) {
        BoxState s = t == 0 ? initial : propagate(initial, t * dt, model);
        s.frame = t;
        s.id = id;
        s.interpolated = false;
        s.conf = 1.0;
        trk.states.push_back(std::move(s));
    }
    return trk;
}

// Nearest-to-ego BEV corner resize, mirroring how detectors misjudge the far
// side of a box while the visible corner stays put.
void resize_about_ego_corner(BoxState& s, double new_w, double new_l, double new_h,
                             const EgoPose& ego) {
    const BevPolygon corners = bev_polygon(s);
    int anchor = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const double d = std::hypot(corners[i].x - ego.x, corners[i].y - ego.y);
        if (d < best) {
            best = d;
            anchor = i;
        }
    }
    const double hl = 0.5 * new_l;
    const double hw = 0.5 * new_w;
    const std::array<Vec2, 4> offs{{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    s.x = corners[anchor].x - (c * offs[anchor].x - sn * offs[anchor].y);
    s.y = corners[anchor].y - (sn * offs[anchor].x + c * offs[anchor].y);
    s.z = s.z_bottom() + 0.5 * new_h;
    s.w = new_w;
    s.l = new_l;
    s.h = new_h;
}

}  // namespace

SyntheticScene generate(std::uint64_t seed, const SceneSpec& spec) {
    if (spec.n_objects < 1) throw ArgumentError("generate: n_objects must be >= 1");
    if (spec.scene_length < 2) throw ArgumentError("generate: scene_length must be >= 2");
    if (!(spec.frame_rate > 0.0)) throw ArgumentError("generate: frame_rate must be > 0");
    if (2 * spec.crossing_pairs > spec.n_objects)
        throw ArgumentError("generate: crossing_pairs exceed n_objects");

    Rng rng(seed);
    SyntheticScene scene;
    scene.seed = seed;
    scene.spec = spec;
    scene.gt.source_name = "gt";
    scene.gt.scene_id = "synth-" + std::to_string(seed);
    scene.gt.scene_length = spec.scene_length;
    scene.gt.frame_rate = spec.frame_rate;

    const double dt = 1.0 / spec.frame_rate;
    std::int64_t next_id = 1;

    // Distinct objects keep a physical separation; only declared crossing
    // partners may come closer, and only around their encounter.
    constexpr double kMinSeparation = 2.2;
    auto separated = [&](const Tracklet& cand) {
        for (const Tracklet& other : scene.gt.tracklets) {
            for (int t = 0; t < spec.scene_length; ++t) {
                const double d = std::hypot(cand.states[t].x - other.states[t].x,
                                            cand.states[t].y - other.states[t].y);
                if (d < kMinSeparation) return false;
            }
        }
        return true;
    };

    // Close-passing pairs: both trajectories run through a shared meeting
    // point mid-scene, offset laterally so the boxes overlap without
    // coinciding. Fast, mid-angle crossings keep the conflict short (a frame
    // or two) while the boxes still overlap at the encounter.
    for (int p = 0; p < spec.crossing_pairs; ++p) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double mx = uniform(rng, -0.5 * spec.extent, 0.5 * spec.extent);
            const double my = uniform(rng, -0.5 * spec.extent, 0.5 * spec.extent);
            const int meet =
                uniform_int(rng, spec.scene_length / 3, 2 * spec.scene_length / 3);
            const double heading_a = wrap_angle(uniform(rng, -M_PI, M_PI));
            const double heading_b = wrap_angle(
                heading_a +
                uniform(rng, 0.5, 0.8) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0));
            const double lateral = uniform(rng, 0.15, 0.4);

            Tracklet a, b;
            for (int side = 0; side < 2; ++side) {
                BoxState s = make_initial_state(rng, spec, next_id + side);
                const double heading = side == 0 ? heading_a : heading_b;
                const double speed =
                    uniform(rng, std::min(std::max(5.0, spec.speed_min), spec.speed_max),
                            spec.speed_max);
                s.theta = heading;
                s.vx = speed * std::cos(heading);
                s.vy = speed * std::sin(heading);
                const double ox = side == 0 ? 0.0 : -lateral * std::sin(heading);
                const double oy = side == 0 ? 0.0 : lateral * std::cos(heading);
                s.x = mx + ox - s.vx * meet * dt;
                s.y = my + oy - s.vy * meet * dt;
                (side == 0 ? a : b) =
                    roll_out(s, MotionModel::constant_velocity(), spec, next_id + side);
            }
            if (attempt < 99 && (!separated(a) || !separated(b))) continue;
            scene.gt.tracklets.push_back(std::move(a));
            scene.gt.tracklets.push_back(std::move(b));
            next_id += 2;
            break;
        }
    }

    const int remaining = spec.n_objects - 2 * spec.crossing_pairs;
    const int n_ctra = static_cast<int>(std::lround(spec.ctra_fraction * remaining));
    for (int i = 0; i < remaining; ++i) {
        MotionModel model = MotionModel::constant_velocity();
        if (i < n_ctra) {
            model.kind = MotionModelKind::Ctra;
            model.turn_rate = uniform(rng, -0.3, 0.3);
            model.acceleration = uniform(rng, -0.5, 0.5);
        }
        for (int attempt = 0; attempt < 100; ++attempt) {
            const BoxState s = make_initial_state(rng, spec, next_id);
            Tracklet trk = roll_out(s, model, spec, next_id);
            if (attempt < 99 && !separated(trk)) continue;
            scene.gt.tracklets.push_back(std::move(trk));
            break;
        }
        ++next_id;
    }

    if (spec.with_ego) {
        scene.gt.ego.resize(spec.scene_length);
        for (int t = 0; t < spec.scene_length; ++t)
            scene.gt.ego[t] = {-spec.extent + 10.0 * t * dt, -0.8 * spec.extent, 0.0};
    }
    return scene;
}

CorruptedOutput corrupt(const SyntheticScene& scene, const CorruptionSpec& spec,
                        std::uint64_t seed) {
    Rng rng(seed);
    CorruptedOutput result;

    std::vector<Tracklet> tracks = scene.gt.tracklets;
    std::vector<std::int64_t> origin;  // per tracklet: gt id or kGhost
    origin.reserve(tracks.size());
    for (const auto& trk : tracks) origin.push_back(trk.id);

    // Tail swaps between close-passing pairs (merged-identity failure mode).
    // Declared crossing pairs come first: those encounters are where a
    // geometry-gated online tracker would actually confuse identities.
    if (spec.id_swaps > 0) {
        struct Candidate {
            bool declared;
            int i, j, frame;
            double dist;
        };
        std::vector<Candidate> candidates;
        for (int i = 0; i < static_cast<int>(tracks.size()); ++i) {
            for (int j = i + 1; j < static_cast<int>(tracks.size()); ++j) {
                double best = std::numeric_limits<double>::infinity();
                int best_frame = -1;
                for (const auto& s : tracks[i].states) {
                    const BoxState* o = tracks[j].state_at(s.frame);
                    if (!o) continue;
                    const double d = std::hypot(s.x - o->x, s.y - o->y);
                    if (d < best) {
                        best = d;
                        best_frame = s.frame;
                    }
                }
                const bool declared =
                    i < 2 * scene.spec.crossing_pairs && j == i + 1 && i % 2 == 0;
                if (best_frame >= 2 && best_frame < scene.gt.scene_length - 2 && best < 0.8)
                    candidates.push_back({declared, i, j, best_frame, best});
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& a, const Candidate& b) {
                      if (a.declared != b.declared) return a.declared;
                      return a.dist < b.dist;
                  });
        std::set<int> used;
        for (const auto& c : candidates) {
            if (result.applied_swaps >= spec.id_swaps) break;
            if (used.count(c.i) || used.count(c.j)) continue;
            used.insert(c.i);
            used.insert(c.j);
            auto split = [&](Tracklet& trk) {
                std::vector<BoxState> tail;
                auto it = std::find_if(trk.states.begin(), trk.states.end(),
                                       [&](const BoxState& s) { return s.frame > c.frame; });
                tail.assign(it, trk.states.end());
                trk.states.erase(it, trk.states.end());
                return tail;
            };
            std::vector<BoxState> tail_i = split(tracks[c.i]);
            std::vector<BoxState> tail_j = split(tracks[c.j]);
            tracks[c.i].states.insert(tracks[c.i].states.end(), tail_j.begin(), tail_j.end());
            tracks[c.j].states.insert(tracks[c.j].states.end(), tail_i.begin(), tail_i.end());
            ++result.applied_swaps;
        }
    }

    // Fragmentation: cut a tracklet in two, removing a short gap.
    for (int e = 0; e < spec.fragment_events; ++e) {
        std::vector<int> eligible;
        for (int i = 0; i < static_cast<int>(tracks.size()); ++i)
            if (tracks[i].age() >= 8) eligible.push_back(i);
        if (eligible.empty()) break;
        const int pick = eligible[uniform_int(rng, 0, static_cast<int>(eligible.size()) - 1)];
        Tracklet& victim = tracks[pick];
        const int gap = uniform_int(rng, spec.min_gap_frames, spec.max_gap_frames);
        const int n = victim.age();
        if (n < gap + 4) continue;
        const int cut = uniform_int(rng, 2, n - gap - 2);

        Tracklet tail;
        tail.id = 0;  // renumbered later
        tail.cls = victim.cls;
        tail.states.assign(victim.states.begin() + cut + gap, victim.states.end());
        victim.states.resize(cut);
        tracks.push_back(std::move(tail));
        origin.push_back(origin[pick]);
        ++result.applied_fragments;
    }

    // Dropout.
    if (!spec.dropout_frames.empty()) {
        const std::set<int> drop(spec.dropout_frames.begin(), spec.dropout_frames.end());
        for (auto& trk : tracks)
            std::erase_if(trk.states,
                          [&](const BoxState& s) { return drop.count(s.frame) > 0; });
    }
    if (spec.dropout > 0.0) {
        for (auto& trk : tracks) {
            std::vector<BoxState> kept;
            for (auto& s : trk.states) {
                if (uniform(rng, 0.0, 1.0) < spec.dropout && trk.age() > 1) continue;
                kept.push_back(s);
            }
            if (!kept.empty()) trk.states = std::move(kept);
        }
    }

    // Measurement noise and per-state confidence.
    for (auto& trk : tracks) {
        for (auto& s : trk.states) {
            if (spec.size_noise > 0.0) {
                const double nw = std::max(0.3, s.w + gauss(rng, spec.size_noise));
                const double nl = std::max(0.3, s.l + gauss(rng, spec.size_noise));
                const double nh = std::max(0.3, s.h + gauss(rng, spec.size_noise));
                if (spec.corner_anchored_size_noise && !scene.gt.ego.empty()) {
                    resize_about_ego_corner(s, nw, nl, nh, scene.gt.ego[s.frame]);
                } else {
                    s.w = nw;
                    s.l = nl;
                    s.h = nh;
                    s.z = s.z_bottom() + 0.5 * nh;
                }
            }
            s.x += gauss(rng, spec.pos_noise);
            s.y += gauss(rng, spec.pos_noise);
            s.theta = wrap_angle(s.theta + gauss(rng, spec.theta_noise));
            s.vx += gauss(rng, spec.vel_noise);
            s.vy += gauss(rng, spec.vel_noise);
            s.conf = uniform(rng, spec.conf_min, spec.conf_max);
        }
    }

    // Ghost tracklets: persistent false positives.
    for (int g = 0; g < spec.ghost_count; ++g) {
        Tracklet ghost;
        ghost.cls = scene.spec.cls;
        const int span = uniform_int(rng, 1, std::max(1, spec.ghost_max_age));
        const int start = uniform_int(rng, 0, scene.gt.scene_length - span);
        BoxState s;
        s.cls = ghost.cls;
        s.w = uniform(rng, 1.8, 2.1);
        s.l = uniform(rng, 4.2, 4.9);
        s.h = uniform(rng, 1.5, 1.8);
        s.z = 0.5 * s.h;
        s.x = uniform(rng, -scene.spec.extent, scene.spec.extent);
        s.y = uniform(rng, -scene.spec.extent, scene.spec.extent);
        s.theta = wrap_angle(uniform(rng, -M_PI, M_PI));
        for (int t = 0; t < span; ++t) {
            BoxState g_state = s;
            g_state.frame = start + t;
            g_state.conf = uniform(rng, spec.ghost_conf_min, spec.ghost_conf_max);
            ghost.states.push_back(std::move(g_state));
        }
        tracks.push_back(std::move(ghost));
        origin.push_back(kGhost);
        ++result.applied_ghosts;
    }

    // Drop emptied tracklets, renumber, and record provenance.
    result.output.source_name = "synth-corrupt";
    result.output.scene_id = scene.gt.scene_id;
    result.output.scene_length = scene.gt.scene_length;
    result.output.frame_rate = scene.gt.frame_rate;
    result.output.ego = scene.gt.ego;
    std::int64_t next_id = 1;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        if (tracks[i].empty()) continue;
        Tracklet trk = std::move(tracks[i]);
        trk.id = next_id++;
        for (auto& s : trk.states) {
            s.id = trk.id;
            s.cls = trk.cls;
        }
        result.provenance[trk.id] = origin[i];
        result.output.tracklets.push_back(std::move(trk));
    }
    return result;
}

namespace {

// Greedy per-frame matching shared by the metric computations.
struct FrameMatch {
    const Tracklet* gt;
    const Tracklet* pred;
};

struct MatchTables {
    // per frame: list of (gt id, pred id)
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> matches;
    int gt_states = 0;
    int pred_states = 0;
};

MatchTables greedy_match(const TrackerOutput& pred, const TrackerOutput& gt,
                         double iou_gate) {
    MatchTables tables;
    const int frames = std::max(gt.scene_length, pred.scene_length);
    tables.matches.resize(frames);

    for (int t = 0; t < frames; ++t) {
        std::vector<const BoxState*> gt_states;
        std::vector<const BoxState*> pred_states;
        for (const auto& trk : gt.tracklets)
            if (const BoxState* s = trk.state_at(t)) gt_states.push_back(s);
        for (const auto& trk : pred.tracklets)
            if (const BoxState* s = trk.state_at(t)) pred_states.push_back(s);
        tables.gt_states += static_cast<int>(gt_states.size());
        tables.pred_states += static_cast<int>(pred_states.size());

        struct Pair {
            double iou;
            std::int64_t gt_id, pred_id;
            std::size_t gi, pi;
        };
        std::vector<Pair> pairs;
        for (std::size_t gi = 0; gi < gt_states.size(); ++gi) {
            for (std::size_t pi = 0; pi < pred_states.size(); ++pi) {
                if (gt_states[gi]->cls != pred_states[pi]->cls) continue;
                const double iou = bev_iou(*gt_states[gi], *pred_states[pi]);
                if (iou >= iou_gate)
                    pairs.push_back({iou, gt_states[gi]->id, pred_states[pi]->id, gi, pi});
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            if (a.iou != b.iou) return a.iou > b.iou;
            if (a.gt_id != b.gt_id) return a.gt_id < b.gt_id;
            return a.pred_id < b.pred_id;
        });
        std::vector<bool> gt_used(gt_states.size(), false);
        std::vector<bool> pred_used(pred_states.size(), false);
        for (const auto& pr : pairs) {
            if (gt_used[pr.gi] || pred_used[pr.pi]) continue;
            gt_used[pr.gi] = true;
            pred_used[pr.pi] = true;
            tables.matches[t].emplace_back(pr.gt_id, pr.pred_id);
        }
    }
    return tables;
}

}  // namespace

Metrics score(const TrackerOutput& pred, const TrackerOutput& gt, double iou_gate) {
    if (gt.scene_length != pred.scene_length || gt.frame_rate != pred.frame_rate)
        throw DataError("score: scene metadata mismatch between pred and gt");
    const MatchTables tables = greedy_match(pred, gt, iou_gate);

    Metrics m;
    m.gt_states = tables.gt_states;
    m.pred_states = tables.pred_states;
    std::map<std::int64_t, std::int64_t> last_match;          // gt id -> pred id
    std::map<std::int64_t, std::set<std::int64_t>> partners;  // gt id -> pred ids
    for (const auto& frame : tables.matches) {
        for (const auto& [gt_id, pred_id] : frame) {
            ++m.matches;
            auto it = last_match.find(gt_id);
            if (it != last_match.end() && it->second != pred_id) ++m.ids;
            last_match[gt_id] = pred_id;
            partners[gt_id].insert(pred_id);
        }
    }
    m.fp = m.pred_states - m.matches;
    m.fn = m.gt_states - m.matches;
    m.score = m.gt_states > 0
                  ? 1.0 - static_cast<double>(m.fp + m.fn + m.ids) / m.gt_states
                  : 1.0;

    int recovered = 0;
    for (const auto& trk : gt.tracklets) {
        auto it = partners.find(trk.id);
        if (it != partners.end() && it->second.size() == 1) ++recovered;
    }
    m.fragment_recovery =
        gt.tracklets.empty() ? 1.0 : static_cast<double>(recovered) / gt.tracklets.size();
    return m;
}

std::map<std::int64_t, int> coverage_by_object(const TrackerOutput& pred,
                                               const TrackerOutput& gt, double iou_gate) {
    const MatchTables tables = greedy_match(pred, gt, iou_gate);
    std::map<std::int64_t, int> coverage;
    for (const auto& trk : gt.tracklets) coverage[trk.id] = 0;
    for (const auto& frame : tables.matches)
        for (const auto& [gt_id, pred_id] : frame) ++coverage[gt_id];
    return coverage;
}

Tracklet rts_smooth(const Tracklet& trk, const SceneContext& ctx, double process_noise,
                    double measurement_noise) {
    const int n = trk.age();
    if (n < 2) return trk;

    // State [x y vx vy], measurements [x y]. 4x4 matrices kept as flat arrays.
    using Mat = std::array<double, 16>;
    using Vec = std::array<double, 4>;
    auto matmul = [](const Mat& a, const Mat& b) {
        Mat c{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                for (int j = 0; j < 4; ++j) c[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
        return c;
    };
    auto transpose = [](const Mat& a) {
        Mat t{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) t[j * 4 + i] = a[i * 4 + j];
        return t;
    };
    auto matvec = [](const Mat& a, const Vec& v) {
        Vec r{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r[i] += a[i * 4 + j] * v[j];
        return r;
    };
    auto inverse = [](Mat a) {  // Gauss-Jordan, small and adequate here
        Mat inv{};
        for (int i = 0; i < 4; ++i) inv[i * 4 + i] = 1.0;
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(a[r * 4 + col]) > std::abs(a[piv * 4 + col])) piv = r;
            for (int j = 0; j < 4; ++j) {
                std::swap(a[col * 4 + j], a[piv * 4 + j]);
                std::swap(inv[col * 4 + j], inv[piv * 4 + j]);
            }
            const double d = a[col * 4 + col];
            for (int j = 0; j < 4; ++j) {
                a[col * 4 + j] /= d;
                inv[col * 4 + j] /= d;
            }
            for (int r = 0; r < 4; ++r) {
                if (r == col) continue;
                const double f = a[r * 4 + col];
                for (int j = 0; j < 4; ++j) {
                    a[r * 4 + j] -= f * a[col * 4 + j];
                    inv[r * 4 + j] -= f * inv[col * 4 + j];
                }
            }
        }
        return inv;
    };

    std::vector<Vec> x_pred(n), x_filt(n);
    std::vector<Mat> p_pred(n), p_filt(n);

    Vec x{trk.states[0].x, trk.states[0].y, trk.states[0].vx, trk.states[0].vy};
    Mat p{};
    for (int i = 0; i < 4; ++i) p[i * 4 + i] = 1.0;
    x_pred[0] = x_filt[0] = x;
    p_pred[0] = p_filt[0] = p;

    std::vector<Mat> fs(n);
    for (int k = 1; k < n; ++k) {
        const double dt = ctx.frames_to_seconds(trk.states[k].frame - trk.states[k - 1].frame);
        Mat f{};
        for (int i = 0; i < 4; ++i) f[i * 4 + i] = 1.0;
        f[0 * 4 + 2] = dt;
        f[1 * 4 + 3] = dt;
        fs[k] = f;

        x = matvec(f, x_filt[k - 1]);
        p = matmul(matmul(f, p_filt[k - 1]), transpose(f));
        const double q = process_noise * dt;
        for (int i = 0; i < 4; ++i) p[i * 4 + i] += q;
        x_pred[k] = x;
        p_pred[k] = p;

        // Measurement update on (x, y).
        const double zx = trk.states[k].x - x[0];
        const double zy = trk.states[k].y - x[1];
        const double s00 = p[0] + measurement_noise;
        const double s11 = p[5] + measurement_noise;
        const double s01 = p[1];
        const double det = s00 * s11 - s01 * s01;
        const double i00 = s11 / det, i01 = -s01 / det, i11 = s00 / det;
        Vec upd = x;
        Mat pk = p;
        for (int i = 0; i < 4; ++i) {
            const double k0 = p[i * 4 + 0] * i00 + p[i * 4 + 1] * i01;
            const double k1 = p[i * 4 + 0] * i01 + p[i * 4 + 1] * i11;
            upd[i] += k0 * zx + k1 * zy;
            for (int j = 0; j < 4; ++j)
                pk[i * 4 + j] -= k0 * p[0 * 4 + j] + k1 * p[1 * 4 + j];
        }
        x_filt[k] = upd;
        p_filt[k] = pk;
    }

    // Backward RTS pass.
    std::vector<Vec> x_smooth(n);
    x_smooth[n - 1] = x_filt[n - 1];
    Mat p_smooth = p_filt[n - 1];
    for (int k = n - 2; k >= 0; --k) {
        const Mat g = matmul(matmul(p_filt[k], transpose(fs[k + 1])), inverse(p_pred[k + 1]));
        Vec dx{};
        for (int i = 0; i < 4; ++i) dx[i] = x_smooth[k + 1][i] - x_pred[k + 1][i];
        x_smooth[k] = x_filt[k];
        const Vec corr = matvec(g, dx);
        for (int i = 0; i < 4; ++i) x_smooth[k][i] += corr[i];
        Mat dp{};
        for (int i = 0; i < 16; ++i) dp[i] = p_smooth[i] - p_pred[k + 1][i];
        p_smooth = p_filt[k];
        const Mat gd = matmul(matmul(g, dp), transpose(g));
        for (int i = 0; i < 16; ++i) p_smooth[i] += gd[i];
    }

    Tracklet out = trk;
    for (int k = 0; k < n; ++k) {
        out.states[k].x = x_smooth[k][0];
        out.states[k].y = x_smooth[k][1];
        out.states[k].vx = x_smooth[k][2];
        out.states[k].vy = x_smooth[k][3];
    }
    return out;
}

}  // namespace retrack::synth
