#include <benchmark/benchmark.h>

#include "lhvprobe/lhv.hpp"
#include "lhvprobe/lp.hpp"
#include "lhvprobe/measurements.hpp"
#include "lhvprobe/states.hpp"

using namespace lhvprobe;

static void BM_probability_table(benchmark::State& state) {
    const DensityOperator rho = bound_entangled_state();
    const SettingsQuad settings = haar_random_settings(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(probability_table(rho, settings));
    }
}
BENCHMARK(BM_probability_table);

static void BM_lp_feasibility_solve(benchmark::State& state) {
    const ProbabilityTable table = probability_table(bound_entangled_state(),
                                                     haar_random_settings(2));
    const LpProblem problem = build_feasibility(table);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(problem));
    }
}
BENCHMARK(BM_lp_feasibility_solve);

static void BM_lhv_feasible(benchmark::State& state) {
    const ProbabilityTable table = probability_table(bound_entangled_state(),
                                                     haar_random_settings(3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lhv_feasible(table));
    }
}
BENCHMARK(BM_lhv_feasible);

static void BM_vertex_oracle(benchmark::State& state) {
    const ProbabilityTable table = probability_table(bound_entangled_state(),
                                                     haar_random_settings(4));
    for (auto _ : state) {
        benchmark::DoNotOptimize(vertex_oracle(table));
    }
}
BENCHMARK(BM_vertex_oracle);

static void BM_critical_admixture(benchmark::State& state) {
    const SettingsQuad settings = haar_random_settings(5);
    const StateAngles angles = canonical_psi_angles();
    for (auto _ : state) {
        benchmark::DoNotOptimize(critical_admixture(settings, angles));
    }
}
BENCHMARK(BM_critical_admixture);

static void BM_haar_settings(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(haar_random_settings(seed++));
    }
}
BENCHMARK(BM_haar_settings);

BENCHMARK_MAIN();
