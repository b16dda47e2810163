#include "linetherm/decoherence.hpp"
#include "linetherm/heatpulse.hpp"
#include "linetherm/iqtemp.hpp"
#include "linetherm/resonator.hpp"
#include "linetherm/synth.hpp"

#include <benchmark/benchmark.h>

using namespace linetherm;

namespace {

void BM_RelaxationFit(benchmark::State& state) {
    const auto trace = synth::gen_decay(decoherence::DecayKind::Relaxation, {1.0, 4.77e5, 0.0, 0.0, 0.0},
                                        synth::linspace(0.0, 10e-6, static_cast<std::size_t>(state.range(0))),
                                        {0.02, 0.0}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(decoherence::fit_trace(trace));
}
BENCHMARK(BM_RelaxationFit)->Arg(101)->Arg(1001);

void BM_RamseyFit(benchmark::State& state) {
    const auto trace = synth::gen_decay(decoherence::DecayKind::Ramsey, {0.5, 2.56e5, 0.5, 2e6, 0.0},
                                        synth::linspace(0.0, 15e-6, 301), {0.02, 0.0}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(decoherence::fit_trace(trace));
}
BENCHMARK(BM_RamseyFit);

void BM_CoolingFit(benchmark::State& state) {
    const SystemParams sys = SystemParams::device_default();
    auto grid = synth::linspace(0.0, 3e-3, 40);
    for (const double tail : {5e-3, 10e-3, 15e-3, 20e-3}) grid.push_back(tail);
    std::vector<HeatPulseSeries> data;
    const double rises[] = {0.024, 0.055, 0.114};
    for (std::size_t k = 0; k < 3; ++k) {
        data.push_back(synth::gen_heatpulse({0.058, rises[k], 0.28e-3, 0.0, 0.0}, sys, grid, {2e3, 300.0}, k, 1e-4));
    }
    for (auto _ : state) benchmark::DoNotOptimize(heatpulse::fit_cooling(data, sys, 0.058));
}
BENCHMARK(BM_CoolingFit)->Unit(benchmark::kMillisecond);

void BM_MixtureEm(benchmark::State& state) {
    const auto mix = synth::thermal_mixture(0.0264, 0.5e9, 4.0, 1.0);
    const auto cloud = synth::gen_iq(mix, static_cast<std::size_t>(state.range(0)), 0.5e9, 1);
    for (auto _ : state) benchmark::DoNotOptimize(iq::fit_mixture(cloud, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MixtureEm)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_PhasePairFit(benchmark::State& state) {
    synth::PhaseParams p;
    p.f_g = 7.4593e9;
    p.f_e = p.f_g - 2.66e6;
    p.kappa_g = 2.0 * 3.141592653589793 * 3.79e6;
    p.kappa_e = 2.0 * 3.141592653589793 * 4.47e6;
    p.tau_delay = 50e-9;
    p.theta0 = 0.7;
    const auto sweep = synth::gen_phase(p, synth::linspace(7.4458e9, 7.4708e9, 401), 0.01, 1);
    for (auto _ : state) benchmark::DoNotOptimize(resonator::fit_phase_pair(sweep));
}
BENCHMARK(BM_PhasePairFit)->Unit(benchmark::kMillisecond);

}  // namespace
