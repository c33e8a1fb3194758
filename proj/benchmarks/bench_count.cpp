#include <benchmark/benchmark.h>

#include "chromopt/graphs.hpp"

namespace {

void BM_CountBrute(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto g = chromopt::graphs::build_turan(n, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chromopt::graphs::count_colorings_brute(g, 5));
    }
}
BENCHMARK(BM_CountBrute)->Arg(7)->Arg(9)->Arg(11);

void BM_CountDeletionContraction(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto g = chromopt::graphs::build_turan(n, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chromopt::graphs::count_colorings_dc(g, 5));
    }
}
BENCHMARK(BM_CountDeletionContraction)->Arg(7)->Arg(9)->Arg(11);

void BM_CountMultipartite(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<int> parts;
    for (int i = 0; i < 10; ++i) parts.push_back(n / 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chromopt::graphs::count_colorings_multipartite(parts, 13));
    }
}
BENCHMARK(BM_CountMultipartite)->Arg(100)->Arg(220)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
