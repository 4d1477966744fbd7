#include "dpg/fortin.hpp"

#include <benchmark/benchmark.h>

using namespace dpg;

namespace {

void BM_BuildPidiv(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fortin::build_pidiv(p).matrix.data());
}
BENCHMARK(BM_BuildPidiv)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_BuildPidivSym(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fortin::build_pidiv_sym(p).matrix.data());
}
BENCHMARK(BM_BuildPidivSym)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_VerifyFortin(benchmark::State& state)
{
    const auto kind = state.range(0) == 0 ? spaces::ProblemKind::Poisson : spaces::ProblemKind::Elasticity;
    const int p = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(fortin::verify_fortin(kind, p, {}).max_relative_residual);
}
BENCHMARK(BM_VerifyFortin)->Args({0, 1})->Args({0, 3})->Args({1, 1})->Args({1, 3})->Unit(benchmark::kMillisecond);

}  // namespace
