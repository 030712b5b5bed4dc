// Serial reference vs OpenMP paths of the parallel kernels.

#include "rbfqf/geometry.hpp"
#include "rbfqf/moments.hpp"
#include "rbfqf/quadrature.hpp"
#include "rbfqf/rbfsystem.hpp"

#include <benchmark/benchmark.h>

using namespace rbfqf;

namespace {

Exec exec_of(const benchmark::State& state) {
    return state.range(1) ? Exec::parallel : Exec::serial;
}

void label(benchmark::State& state) { state.SetLabel(state.range(1) ? "parallel" : "serial"); }

RbfSpace space_2d(int n) {
    return RbfSpace::make(Kernel::wendland(2, 1), halton(Domain::unit(2), n),
                          ShapePolicy::constant(6.0), 1);
}

void BM_Assemble(benchmark::State& state) {
    const RbfSpace s = space_2d(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble(s, exec_of(state)).phi.data());
    label(state);
}

void BM_Moments(benchmark::State& state) {
    const RbfSpace s = space_2d(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(rbf_moments(s, Domain::unit(2), exec_of(state)).rbf.data());
    label(state);
}

void BM_NearestNeighbors(benchmark::State& state) {
    const PointSet p = halton(Domain::unit(2), static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(nearest_neighbor_distances(p, exec_of(state)).data());
    label(state);
}

void BM_MonteCarlo(benchmark::State& state) {
    const PointSet p = equidistant(Domain::unit(2), 8);
    const auto samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(monte_carlo_uncovered(p, 0.06, samples, 1, exec_of(state)));
    label(state);
}

void BM_Lebesgue(benchmark::State& state) {
    const RbfSpace s = space_2d(static_cast<int>(state.range(0)));
    const PointSet grid = default_lebesgue_grid(Domain::unit(2));
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_lebesgue(s, grid, exec_of(state)));
    label(state);
}

} // namespace

BENCHMARK(BM_Assemble)->ArgsProduct({{400, 1600}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Moments)->ArgsProduct({{100, 400}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestNeighbors)->ArgsProduct({{1000, 4000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->ArgsProduct({{1 << 20}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lebesgue)->ArgsProduct({{100}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
