#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "retrack/config.hpp"
#include "retrack/types.hpp"

namespace retrack {

struct WeightedEdge {
    int i = 0;
    int j = 0;
    double weight = 0.0;
};

/// Undirected graph with strictly positive finite edge weights and no
/// self-loops (sub-threshold edges are filtered before construction).
struct WeightedGraph {
    int n = 0;
    std::vector<WeightedEdge> edges;
};

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm).
/// Returns disjoint vertex pairs (i < j), sorted. With
/// MatchingObjective::MaxCardinality the matching is restricted to
/// maximum-cardinality matchings and maximizes weight among those.
/// The result does not depend on the order of the input edge list.
std::vector<std::pair<int, int>> max_weight_matching(
    const WeightedGraph& g, MatchingObjective objective = MatchingObjective::MaxWeight);

/// Symmetric 0/1 connectivity with a zero diagonal.
class BinaryAdjacency {
public:
    explicit BinaryAdjacency(int n);

    int size() const { return n_; }
    void connect(int i, int j);
    bool at(int i, int j) const { return bits_[index(i, j)] != 0; }

private:
    std::size_t index(int i, int j) const;
    int n_;
    std::vector<std::uint8_t> bits_;
};

/// Maximal connected node sets (depth-first search). Components are sorted
/// internally and ordered by smallest member; together they partition [0, n).
std::vector<std::vector<int>> connected_components(const BinaryAdjacency& adj);

}  // namespace retrack
