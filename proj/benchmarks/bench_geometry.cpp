#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "retrack/geometry.hpp"

using namespace retrack;

namespace {

std::vector<std::pair<BoxState, BoxState>> make_pairs(int n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    std::uniform_real_distribution<double> size(0.5, 5.0);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    auto box = [&] {
        BoxState b;
        b.x = pos(rng);
        b.y = pos(rng);
        b.z = pos(rng);
        b.w = size(rng);
        b.l = size(rng);
        b.h = size(rng);
        b.theta = angle(rng);
        b.cls = "car";
        return b;
    };
    std::vector<std::pair<BoxState, BoxState>> pairs;
    pairs.reserve(n);
    for (int i = 0; i < n; ++i) pairs.emplace_back(box(), box());
    return pairs;
}

}  // namespace

static void BevIou(benchmark::State& state) {
    const auto pairs = make_pairs(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [a, b] = pairs[i++ & 1023];
        benchmark::DoNotOptimize(bev_iou(a, b));
    }
}
BENCHMARK(BevIou);

static void Iou3d(benchmark::State& state) {
    const auto pairs = make_pairs(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [a, b] = pairs[i++ & 1023];
        benchmark::DoNotOptimize(iou_3d(a, b));
    }
}
BENCHMARK(Iou3d);

static void GIou3d(benchmark::State& state) {
    const auto pairs = make_pairs(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [a, b] = pairs[i++ & 1023];
        benchmark::DoNotOptimize(giou_3d(a, b));
    }
}
BENCHMARK(GIou3d);

BENCHMARK_MAIN();
