#include "dpg/manufactured.hpp"
#include "dpg/pipeline.hpp"

#include <benchmark/benchmark.h>

using namespace dpg;

namespace {

ProblemSetup setup(spaces::ProblemKind kind, int p)
{
    ProblemSetup s;
    s.kind = kind;
    s.p = p;
    s.f = study::smooth_solution(kind).f;
    return s;
}

// range(0): n, range(1): p
void BM_DiscretizePoisson(benchmark::State& state)
{
    const auto s = setup(spaces::ProblemKind::Poisson, static_cast<int>(state.range(1)));
    const auto m = mesh::unit_square_mesh(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(discretize(m, s).system.S.nonZeros());
    state.SetItemsProcessed(state.iterations() * m.num_elements());
}
BENCHMARK(BM_DiscretizePoisson)->Args({8, 1})->Args({16, 1})->Args({16, 2})->Unit(benchmark::kMillisecond);

void BM_SolveCholesky(benchmark::State& state)
{
    auto d = discretize(mesh::unit_square_mesh(static_cast<int>(state.range(0))),
                        setup(spaces::ProblemKind::Poisson, static_cast<int>(state.range(1))));
    for (auto _ : state) benchmark::DoNotOptimize(solve(d).relative_residual);
    state.counters["dofs"] = d.system.size();
}
BENCHMARK(BM_SolveCholesky)->Args({16, 1})->Args({32, 1})->Args({16, 2})->Unit(benchmark::kMillisecond);

void BM_SolveCg(benchmark::State& state)
{
    auto d = discretize(mesh::unit_square_mesh(static_cast<int>(state.range(0))), setup(spaces::ProblemKind::Poisson, 1));
    system::SolverOptions o;
    o.kind = system::SolverKind::ConjugateGradient;
    o.tolerance = 1e-10;
    int iterations = 0;
    for (auto _ : state) iterations = solve(d, o).iterations;
    state.counters["cg_iterations"] = iterations;
}
BENCHMARK(BM_SolveCg)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ConditionEstimate(benchmark::State& state)
{
    const auto d = discretize(mesh::unit_square_mesh(static_cast<int>(state.range(0))), setup(spaces::ProblemKind::Poisson, 0));
    for (auto _ : state) benchmark::DoNotOptimize(system::condition_estimate(d.system).kappa);
}
BENCHMARK(BM_ConditionEstimate)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_DiscretizeElasticity(benchmark::State& state)
{
    const auto s = setup(spaces::ProblemKind::Elasticity, static_cast<int>(state.range(1)));
    const auto m = mesh::unit_square_mesh(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(discretize(m, s).system.S.nonZeros());
}
BENCHMARK(BM_DiscretizeElasticity)->Args({8, 0})->Args({8, 1})->Unit(benchmark::kMillisecond);

}  // namespace
