#include "dpg/forms.hpp"
#include "dpg/t2t.hpp"

#include <benchmark/benchmark.h>

using namespace dpg;

namespace {

struct LocalFixture {
    mesh::Mesh mesh = mesh::unit_square_mesh(1);
    forms::ElementTables tables;
    forms::ElementGeometry geometry;

    LocalFixture(spaces::ProblemKind kind, int p)
    {
        tables = forms::make_tables(spaces::build_test_layout(mesh, p, {}, kind));
        geometry = forms::element_geometry(mesh, 0, tables);
    }
};

void BM_LocalPoisson(benchmark::State& state)
{
    const LocalFixture f(spaces::ProblemKind::Poisson, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto gram = forms::local_gram_poisson(f.geometry, f.tables);
        auto blocks = forms::local_b_poisson(f.geometry, f.tables);
        benchmark::DoNotOptimize(t2t::trial_to_test_local(gram, blocks).S.data());
    }
}
BENCHMARK(BM_LocalPoisson)->DenseRange(0, 3);

void BM_LocalElasticity(benchmark::State& state)
{
    const LocalFixture f(spaces::ProblemKind::Elasticity, static_cast<int>(state.range(0)));
    const auto a = forms::ComplianceTensor::isotropic(1.0, 1.0);
    for (auto _ : state) {
        auto gram = forms::local_gram_elasticity(f.geometry, f.tables);
        auto blocks = forms::local_b_elasticity(f.geometry, f.tables, a, a.trace_of_identity());
        benchmark::DoNotOptimize(t2t::trial_to_test_local(gram, blocks).S.data());
    }
}
BENCHMARK(BM_LocalElasticity)->DenseRange(0, 2);

void BM_Tables(benchmark::State& state)
{
    const auto m = mesh::reference_triangle_mesh();
    const auto layout = spaces::build_test_layout(m, static_cast<int>(state.range(0)), {}, spaces::ProblemKind::Poisson);
    for (auto _ : state) benchmark::DoNotOptimize(forms::make_tables(layout).trial.values.data());
}
BENCHMARK(BM_Tables)->DenseRange(0, 3);

}  // namespace
