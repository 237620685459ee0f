#include <benchmark/benchmark.h>

#include "loglab/concavity.hpp"
#include "loglab/linops.hpp"
#include "loglab/oned.hpp"
#include "loglab/solver.hpp"

using namespace loglab;

static void BM_PrincipalEigenpair(benchmark::State& state) {
    const GridPtr g = make_grid(Domain::box({1.0, 1.0}), static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(principal_eigenpair(g, 1e-12).lambda1);
}
BENCHMARK(BM_PrincipalEigenpair)->Arg(51)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

static void BM_NewtonLog(benchmark::State& state) {
    const GridPtr g = make_grid(Domain::box({1.0, 1.0}), static_cast<int>(state.range(0)));
    const Reaction r = Reaction::log_schrodinger();
    const Field guess = initial_guess(g, r);
    for (auto _ : state) benchmark::DoNotOptimize(newton_solve(r, guess).sup_norm);
}
BENCHMARK(BM_NewtonLog)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

static void BM_TimeMap(benchmark::State& state) {
    const double m = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(oned::time_map(m));
}
BENCHMARK(BM_TimeMap)->Arg(17)->Arg(30)->Arg(1000);

static void BM_ConcavityCheck(benchmark::State& state) {
    const GridPtr g = make_grid(Domain::box({1.0, 1.0}), static_cast<int>(state.range(0)));
    const Field u = oned::tensor_solution(g);
    for (auto _ : state) benchmark::DoNotOptimize(check_transform_concavity(u, Transform::log()).extreme_eigenvalue);
}
BENCHMARK(BM_ConcavityCheck)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
