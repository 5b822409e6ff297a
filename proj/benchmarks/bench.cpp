#include <benchmark/benchmark.h>

#include "nahm/adhm.hpp"
#include "nahm/solver.hpp"

namespace {

nahm::MonopoleType su3_type() { return nahm::MonopoleType({-6, -2}, {1, 1}); }

void bm_residual(benchmark::State& state) {
    const nahm::NahmSolution s = nahm::random_init(su3_type(), 7, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(nahm::total_residual(s));
}
BENCHMARK(bm_residual);

void bm_assemble(benchmark::State& state) {
    const nahm::NahmSolution s = nahm::random_init(su3_type(), 7, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(nahm::assemble(s));
}
BENCHMARK(bm_assemble);

void bm_monad_maps(benchmark::State& state) {
    const nahm::ADHMData d = nahm::assemble(nahm::random_init(su3_type(), 7, 1.0));
    const nahm::ProjPoint x{nahm::Complex(0.3, 0.1), nahm::Complex(-0.2, 0.7),
                            nahm::Complex(1.0, 0.0), nahm::Complex(0.4, -0.5)};
    for (auto _ : state) benchmark::DoNotOptimize(nahm::monad_maps(d, x));
}
BENCHMARK(bm_monad_maps);

void bm_solve_su2(benchmark::State& state) {
    const nahm::MonopoleType t({-1}, {1});
    nahm::SolverOptions opts;
    opts.restarts = 1;
    for (auto _ : state) benchmark::DoNotOptimize(nahm::solve(t, opts));
}
BENCHMARK(bm_solve_su2);

} // namespace

BENCHMARK_MAIN();
