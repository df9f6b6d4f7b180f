#include "retrack/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace retrack {

namespace {

// Port of the classic O(n^3) maximum-weight general matching algorithm
// (Galil's exposition of Edmonds' blossom algorithm, widely circulated as
// mwmatching). Vertices are 0..n-1, blossoms n..2n-1. Endpoint p of edge
// k = p/2 refers to edges[k].i when p is even, edges[k].j when odd.
class BlossomMatcher {
public:
    BlossomMatcher(int n, std::vector<WeightedEdge> edges, bool max_cardinality)
        : n_(n), edges_(std::move(edges)), max_cardinality_(max_cardinality) {}

    std::vector<int> solve() {
        const int m = static_cast<int>(edges_.size());
        mate_.assign(n_, -1);
        if (n_ == 0 || m == 0) return mate_;

        double max_weight = 0.0;
        for (const auto& e : edges_) max_weight = std::max(max_weight, e.weight);

        endpoint_.resize(2 * m);
        for (int p = 0; p < 2 * m; ++p)
            endpoint_[p] = (p % 2 == 0) ? edges_[p / 2].i : edges_[p / 2].j;
        neighbend_.assign(n_, {});
        for (int k = 0; k < m; ++k) {
            neighbend_[edges_[k].i].push_back(2 * k + 1);
            neighbend_[edges_[k].j].push_back(2 * k);
        }

        label_.assign(2 * n_, 0);
        labelend_.assign(2 * n_, -1);
        inblossom_.resize(n_);
        for (int v = 0; v < n_; ++v) inblossom_[v] = v;
        blossomparent_.assign(2 * n_, -1);
        blossomchilds_.assign(2 * n_, {});
        blossombase_.resize(2 * n_);
        for (int v = 0; v < n_; ++v) blossombase_[v] = v;
        for (int b = n_; b < 2 * n_; ++b) blossombase_[b] = -1;
        blossomendps_.assign(2 * n_, {});
        bestedge_.assign(2 * n_, -1);
        blossombestedges_.assign(2 * n_, {});
        hasbestedges_.assign(2 * n_, false);
        unusedblossoms_.clear();
        for (int b = 2 * n_ - 1; b >= n_; --b) unusedblossoms_.push_back(b);
        dualvar_.assign(2 * n_, 0.0);
        for (int v = 0; v < n_; ++v) dualvar_[v] = max_weight;
        allowedge_.assign(m, false);

        for (int stage = 0; stage < n_; ++stage) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = n_; b < 2 * n_; ++b) {
                blossombestedges_[b].clear();
                hasbestedges_[b] = false;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), false);
            queue_.clear();
            for (int v = 0; v < n_; ++v)
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

            bool augmented = false;
            for (;;) {
                while (!queue_.empty() && !augmented) {
                    const int v = queue_.front();
                    queue_.pop_front();
                    for (const int p : neighbend_[v]) {
                        const int k = p / 2;
                        const int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) continue;
                        double kslack = 0.0;
                        if (!allowedge_[k]) {
                            kslack = slack(k);
                            if (kslack <= kEps) allowedge_[k] = true;
                        }
                        if (allowedge_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                const int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            const int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b]))
                                bestedge_[b] = k;
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w]))
                                bestedge_[w] = k;
                        }
                    }
                }
                if (augmented) break;

                // No augmenting path; adjust duals by the tightest constraint.
                int deltatype = -1;
                double delta = 0.0;
                int deltaedge = -1;
                int deltablossom = -1;
                if (!max_cardinality_) {
                    deltatype = 1;
                    delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
                }
                for (int v = 0; v < n_; ++v) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        const double d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * n_; ++b) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        const double d = 0.5 * slack(bestedge_[b]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = n_; b < 2 * n_; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dualvar_[b] < delta)) {
                        delta = dualvar_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    // Max-cardinality mode with no further progress possible.
                    deltatype = 1;
                    delta = std::max(
                        0.0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
                }

                for (int v = 0; v < n_; ++v) {
                    const int lbl = label_[inblossom_[v]];
                    if (lbl == 1) dualvar_[v] -= delta;
                    else if (lbl == 2) dualvar_[v] += delta;
                }
                for (int b = n_; b < 2 * n_; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1) dualvar_[b] += delta;
                        else if (label_[b] == 2) dualvar_[b] -= delta;
                    }
                }

                if (deltatype == 1) break;
                if (deltatype == 2) {
                    allowedge_[deltaedge] = true;
                    int i = edges_[deltaedge].i;
                    if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].j;
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge] = true;
                    queue_.push_back(edges_[deltaedge].i);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) break;

            for (int b = n_; b < 2 * n_; ++b) {
                if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
                    dualvar_[b] <= kEps)
                    expand_blossom(b, true);
            }
        }

        for (int v = 0; v < n_; ++v)
            if (mate_[v] >= 0) mate_[v] = endpoint_[mate_[v]];
        return mate_;
    }

private:
    static constexpr double kEps = 1e-12;

    double slack(int k) const {
        return dualvar_[edges_[k].i] + dualvar_[edges_[k].j] - 2.0 * edges_[k].weight;
    }

    template <typename Container>
    void blossom_leaves(int b, Container& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (const int t : blossomchilds_[b]) blossom_leaves(t, out);
    }

    void assign_label(int w, int t, int p) {
        const int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            blossom_leaves(b, queue_);
        } else {
            const int base = blossombase_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    // Trace back from v and w to find the closest common ancestor of the
    // alternating trees; returns its base vertex or -1 when the roots differ.
    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = blossombase_[b];
                break;
            }
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) std::swap(v, w);
        }
        for (const int b : path) label_[b] = 1;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].i;
        int w = edges_[k].j;
        const int bb = inblossom_[base];
        int bv = inblossom_[v];
        int bw = inblossom_[w];
        const int b = unusedblossoms_.back();
        unusedblossoms_.pop_back();
        blossombase_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;

        std::vector<int> path;
        std::vector<int> endps;
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }

        blossomchilds_[b] = std::move(path);
        blossomendps_[b] = std::move(endps);
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dualvar_[b] = 0.0;

        std::vector<int> leaves;
        blossom_leaves(b, leaves);
        for (const int leaf : leaves) {
            if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
            inblossom_[leaf] = b;
        }

        // Recompute least-slack edges from the new blossom to S-blossoms.
        std::vector<int> bestedgeto(2 * n_, -1);
        for (const int child : blossomchilds_[b]) {
            std::vector<std::vector<int>> nblists;
            if (!hasbestedges_[child]) {
                std::vector<int> child_leaves;
                blossom_leaves(child, child_leaves);
                for (const int leaf : child_leaves) {
                    std::vector<int> ks;
                    ks.reserve(neighbend_[leaf].size());
                    for (const int p : neighbend_[leaf]) ks.push_back(p / 2);
                    nblists.push_back(std::move(ks));
                }
            } else {
                nblists.push_back(blossombestedges_[child]);
            }
            for (const auto& nblist : nblists) {
                for (const int ek : nblist) {
                    int i = edges_[ek].i;
                    int j = edges_[ek].j;
                    if (inblossom_[j] == b) std::swap(i, j);
                    const int bj = inblossom_[j];
                    if (bj != b && label_[bj] == 1 &&
                        (bestedgeto[bj] == -1 || slack(ek) < slack(bestedgeto[bj])))
                        bestedgeto[bj] = ek;
                }
            }
            blossombestedges_[child].clear();
            hasbestedges_[child] = false;
            bestedge_[child] = -1;
        }
        blossombestedges_[b].clear();
        for (const int ek : bestedgeto)
            if (ek != -1) blossombestedges_[b].push_back(ek);
        hasbestedges_[b] = true;
        bestedge_[b] = -1;
        for (const int ek : blossombestedges_[b])
            if (bestedge_[b] == -1 || slack(ek) < slack(bestedge_[b])) bestedge_[b] = ek;
    }

    void expand_blossom(int b, bool endstage) {
        for (const int s : blossomchilds_[b]) {
            blossomparent_[s] = -1;
            if (s < n_) {
                inblossom_[s] = s;
            } else if (endstage && dualvar_[s] <= kEps) {
                expand_blossom(s, endstage);
            } else {
                std::vector<int> leaves;
                blossom_leaves(s, leaves);
                for (const int leaf : leaves) inblossom_[leaf] = s;
            }
        }
        if (!endstage && label_[b] == 2) {
            // Relabel the even-length half of the blossom path that connects
            // the entry child to the base, and leave the rest unlabeled.
            const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            const auto& childs = blossomchilds_[b];
            const int nchilds = static_cast<int>(childs.size());
            int j = static_cast<int>(
                std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= nchilds;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            auto at = [&](int idx) { return childs[(idx % nchilds + nchilds) % nchilds]; };
            auto endp = [&](int idx) {
                const auto& eps = blossomendps_[b];
                const int ne = static_cast<int>(eps.size());
                return eps[(idx % ne + ne) % ne];
            };
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[endp(j - endptrick) ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allowedge_[endp(j - endptrick) / 2] = true;
                j += jstep;
                p = endp(j - endptrick) ^ endptrick;
                allowedge_[p / 2] = true;
                j += jstep;
            }
            const int bv0 = at(j);
            label_[endpoint_[p ^ 1]] = label_[bv0] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv0] = p;
            bestedge_[bv0] = -1;
            j += jstep;
            while (at(j) != entrychild) {
                const int bv = at(j);
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                std::vector<int> leaves;
                blossom_leaves(bv, leaves);
                int labeled_leaf = -1;
                for (const int leaf : leaves) {
                    if (label_[leaf] != 0) {
                        labeled_leaf = leaf;
                        break;
                    }
                }
                if (labeled_leaf >= 0) {
                    label_[labeled_leaf] = 0;
                    label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                    assign_label(labeled_leaf, 2, labelend_[labeled_leaf]);
                }
                j += jstep;
            }
        }
        label_[b] = -1;
        labelend_[b] = -1;
        blossomchilds_[b].clear();
        blossomendps_[b].clear();
        blossombase_[b] = -1;
        blossombestedges_[b].clear();
        hasbestedges_[b] = false;
        bestedge_[b] = -1;
        unusedblossoms_.push_back(b);
    }

    // Swap matched and unmatched edges along the blossom path from v down to
    // the base, then rotate so that v becomes the new base.
    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) t = blossomparent_[t];
        if (t >= n_) augment_blossom(t, v);
        auto& childs = blossomchilds_[b];
        auto& endps = blossomendps_[b];
        const int nchilds = static_cast<int>(childs.size());
        const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) -
                                       childs.begin());
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= nchilds;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        auto at = [&](int idx) { return childs[(idx % nchilds + nchilds) % nchilds]; };
        auto endp = [&](int idx) {
            const int ne = static_cast<int>(endps.size());
            return endps[(idx % ne + ne) % ne];
        };
        while (j != 0) {
            j += jstep;
            int tt = at(j);
            const int p = endp(j - endptrick) ^ endptrick;
            if (tt >= n_) augment_blossom(tt, endpoint_[p]);
            j += jstep;
            tt = at(j);
            if (tt >= n_) augment_blossom(tt, endpoint_[p ^ 1]);
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(childs.begin(), childs.begin() + i, childs.end());
        std::rotate(endps.begin(), endps.begin() + i, endps.end());
        blossombase_[b] = blossombase_[childs[0]];
    }

    void augment_matching(int k) {
        const int kv = edges_[k].i;
        const int kw = edges_[k].j;
        const std::pair<int, int> starts[2] = {{kv, 2 * k + 1}, {kw, 2 * k}};
        for (const auto& [s0, p0] : starts) {
            int s = s0;
            int p = p0;
            for (;;) {
                const int bs = inblossom_[s];
                if (bs >= n_) augment_blossom(bs, s);
                mate_[s] = p;
                if (labelend_[bs] == -1) break;
                const int t = endpoint_[labelend_[bs]];
                const int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                const int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= n_) augment_blossom(bt, j);
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    int n_;
    std::vector<WeightedEdge> edges_;
    bool max_cardinality_;

    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<bool> hasbestedges_;
    std::vector<int> unusedblossoms_;
    std::vector<double> dualvar_;
    std::vector<bool> allowedge_;
    std::deque<int> queue_;
};

}  // namespace

std::vector<std::pair<int, int>> max_weight_matching(const WeightedGraph& g,
                                                     MatchingObjective objective) {
    std::vector<WeightedEdge> edges = g.edges;
    for (const auto& e : edges) {
        if (e.i < 0 || e.j < 0 || e.i >= g.n || e.j >= g.n)
            throw ArgumentError("max_weight_matching: edge endpoint out of range");
        if (e.i == e.j) throw ArgumentError("max_weight_matching: self-loop");
        if (!std::isfinite(e.weight) || e.weight <= 0.0)
            throw ArgumentError("max_weight_matching: weights must be finite and > 0");
    }
    // Canonical edge order makes the result independent of input order.
    for (auto& e : edges)
        if (e.i > e.j) std::swap(e.i, e.j);
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return a.i < b.i || (a.i == b.i && a.j < b.j);
    });

    BlossomMatcher matcher(g.n, std::move(edges),
                           objective == MatchingObjective::MaxCardinality);
    const std::vector<int> mate = matcher.solve();

    std::vector<std::pair<int, int>> pairs;
    for (int v = 0; v < static_cast<int>(mate.size()); ++v)
        if (mate[v] > v) pairs.emplace_back(v, mate[v]);
    return pairs;
}

BinaryAdjacency::BinaryAdjacency(int n) : n_(n) {
    if (n < 0) throw ArgumentError("BinaryAdjacency: negative size");
    bits_.assign(static_cast<std::size_t>(n) * n, 0);
}

std::size_t BinaryAdjacency::index(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw ArgumentError("BinaryAdjacency: index out of range");
    return static_cast<std::size_t>(i) * n_ + j;
}

void BinaryAdjacency::connect(int i, int j) {
    if (i == j) throw ArgumentError("BinaryAdjacency: self-connection");
    bits_[index(i, j)] = 1;
    bits_[index(j, i)] = 1;
}

std::vector<std::vector<int>> connected_components(const BinaryAdjacency& adj) {
    const int n = adj.size();
    std::vector<std::vector<int>> components;
    std::vector<bool> visited(n, false);
    std::vector<int> stack;
    for (int root = 0; root < n; ++root) {
        if (visited[root]) continue;
        std::vector<int> comp;
        stack.push_back(root);
        visited[root] = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int w = 0; w < n; ++w) {
                if (!visited[w] && adj.at(v, w)) {
                    visited[w] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

}  // namespace retrack
