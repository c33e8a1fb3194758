#include <benchmark/benchmark.h>

#include "chromopt/kkt.hpp"

namespace {

void BM_GlobalSolve(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    const double s = q * 0.75;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chromopt::kkt::global_solve(q, s));
    }
}
BENCHMARK(BM_GlobalSolve)->Arg(6)->Arg(13)->Arg(20)->Arg(30);

void BM_GlobalSolveParanoid(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    const double s = q * 0.75;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chromopt::kkt::global_solve(q, s, true));
    }
}
BENCHMARK(BM_GlobalSolveParanoid)->Arg(13)->Arg(20);

void BM_BruteOpt(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    const double s = q * 0.6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chromopt::kkt::brute_opt(q, s, 8, 500, 20240801));
    }
}
BENCHMARK(BM_BruteOpt)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
