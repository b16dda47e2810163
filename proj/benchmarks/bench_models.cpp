#include "linetherm/fin.hpp"
#include "linetherm/shotnoise.hpp"
#include "linetherm/synth.hpp"

#include <benchmark/benchmark.h>

using namespace linetherm;

namespace {

void BM_DephasingFull(benchmark::State& state) {
    const SystemParams sys = SystemParams::device_default();
    double n = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(shotnoise::dephasing_full(n, sys));
        n = n < 1.0 ? n * 1.001 : 1e-3;
    }
}
BENCHMARK(BM_DephasingFull);

void BM_PhotonInversion(benchmark::State& state) {
    const SystemParams sys = SystemParams::device_default();
    for (auto _ : state) benchmark::DoNotOptimize(shotnoise::photons_from_dephasing(2.7e4, sys));
}
BENCHMARK(BM_PhotonInversion);

void BM_FinDiscrete(benchmark::State& state) {
    const auto p = fin::FinParams::from_shape(1.0, 1.6e4, 0.045, 0.025, 0.1, 1e-6);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fin::solve_discrete(p, n));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FinDiscrete)->RangeMultiplier(10)->Range(100, 100000)->Complexity(benchmark::oN);

void BM_FinExtraction(benchmark::State& state) {
    const std::vector<double> powers{0.5e-6, 1e-6, 1.5e-6, 2e-6, 2.5e-6, 3e-6};
    const auto exp = synth::gen_fin(1.0, 1.6e4, {0.045, 0.025, 1e-3}, 0.1, powers, {0.05, 0.0}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(fin::extract_resistances(exp, 3e-6));
}
BENCHMARK(BM_FinExtraction);

}  // namespace
