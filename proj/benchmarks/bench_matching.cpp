#include <benchmark/benchmark.h>

#include <random>

#include "retrack/graph.hpp"

using namespace retrack;

static WeightedGraph random_graph(int n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> wd(0.05, 1.0);
    std::uniform_real_distribution<double> pd(0.0, 1.0);
    WeightedGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (pd(rng) < density) g.edges.push_back({i, j, wd(rng)});
    return g;
}

static void MaxWeightMatching(benchmark::State& state) {
    const WeightedGraph g = random_graph(static_cast<int>(state.range(0)), 0.4, 7);
    for (auto _ : state) benchmark::DoNotOptimize(max_weight_matching(g));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(MaxWeightMatching)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void ConnectedComponents(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pd(0.0, 1.0);
    BinaryAdjacency adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (pd(rng) < 4.0 / n) adj.connect(i, j);
    for (auto _ : state) benchmark::DoNotOptimize(connected_components(adj));
    state.SetComplexityN(n);
}
BENCHMARK(ConnectedComponents)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

BENCHMARK_MAIN();
