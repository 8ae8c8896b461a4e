#include <benchmark/benchmark.h>

#include "ringfuse/elastic_net.hpp"
#include "ringfuse/instance.hpp"
#include "ringfuse/lattice.hpp"
#include "ringfuse/oracle.hpp"
#include "ringfuse/rng.hpp"

using namespace ringfuse;

namespace {

Instance make_instance(int n) { return generate_instance(n, 1234, 1.0); }

std::vector<Point2> make_ring(int m, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point2> w(static_cast<size_t>(m));
    for (auto& wi : w) wi = {rng.uniform(), rng.uniform()};
    return w;
}

void BM_ElasticEnergy(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)));
    const auto ring = make_ring(static_cast<int>(2.5 * state.range(0)) + 1, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(elastic_energy(inst, ring, 0.1, 1.0));
}
BENCHMARK(BM_ElasticEnergy)->Arg(10)->Arg(50)->Arg(200);

void BM_ElasticGradient(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)));
    const auto ring = make_ring(static_cast<int>(2.5 * state.range(0)) + 1, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(elastic_gradient(inst, ring, 0.1, 1.0));
}
BENCHMARK(BM_ElasticGradient)->Arg(10)->Arg(50)->Arg(200);

void BM_AnnealSolve(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(anneal_solve(inst, ElasticParams{}, 1));
}
BENCHMARK(BM_AnnealSolve)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_HeldKarp(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_held_karp(inst));
}
BENCHMARK(BM_HeldKarp)->Arg(8)->Arg(12)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_Enumeration(benchmark::State& state) {
    const auto inst = make_instance(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_enumeration(inst));
}
BENCHMARK(BM_Enumeration)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_LogPartitionMc(benchmark::State& state) {
    LatticeGraph g;
    g.n = 16;
    for (int i = 0; i < 16; ++i) g.edges.emplace_back(i, (i + 1) % 16);
    g.pinned = {0};
    for (auto _ : state)
        benchmark::DoNotOptimize(log_partition_mc(g, state.range(0), 3));
}
BENCHMARK(BM_LogPartitionMc)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
