#include <catch_amalgamated.hpp>

using Catch::Approx;

#include "linetherm/error.hpp"
#include "linetherm/heatpulse.hpp"
#include "linetherm/shotnoise.hpp"
#include "linetherm/synth.hpp"

#include <cmath>
#include <vector>

using namespace linetherm;
using namespace linetherm::heatpulse;

namespace {

const SystemParams kDevice = SystemParams::device_default();

double rel(double a, double b) { return std::abs(a / b - 1.0); }

/// Dense sampling over the decay plus a long-time tail.
std::vector<double> cooling_grid() {
    auto t = synth::linspace(0.0, 3e-3, 40);
    for (const double tail : {5e-3, 10e-3, 15e-3, 20e-3}) t.push_back(tail);
    return t;
}

std::vector<HeatPulseSeries> scenario(double t0, double tau, const std::vector<double>& delta_t,
                                      const synth::HeatPulseNoise& noise, std::uint64_t seed,
                                      double gamma_offset = 0.0, double f0_offset = 0.0) {
    std::vector<HeatPulseSeries> out;
    for (std::size_t k = 0; k < delta_t.size(); ++k) {
        const HeatPulseModelParams m{t0, delta_t[k], tau, gamma_offset, f0_offset};
        out.push_back(synth::gen_heatpulse(m, kDevice, cooling_grid(), noise, seed * 1000 + k, 1e-4));
    }
    return out;
}

}  // namespace

TEST_CASE("temperature trajectory", "[heatpulse]") {
    const HeatPulseModelParams m{0.058, 0.114, 0.28e-3, 0.0, 0.0};
    CHECK(temperature_at(m, 0.0) == Approx(0.172).epsilon(1e-15));
    CHECK(rel(temperature_at(m, 0.28e-3), 0.058 + 0.114 / M_E) < 1e-14);
    CHECK_THROWS_AS(temperature_at(m, -1.0), Error);
    CHECK_THROWS_AS(temperature_at({0.0, 0.1, 1e-3, 0, 0}, 0.0), Error);
}

TEST_CASE("no heating gives a flat trajectory", "[heatpulse]") {
    const HeatPulseModelParams m{0.058, 0.0, 0.28e-3, 0.0, 0.0};
    const auto first = trajectory(m, kDevice, 0.0);
    for (const double t : {1e-5, 1e-4, 1e-3, 1.0}) {
        const auto p = trajectory(m, kDevice, t);
        CHECK(p.gamma_n == first.gamma_n);
        CHECK(p.delta_f == first.delta_f);
    }
}

TEST_CASE("trajectory anchors", "[heatpulse]") {
    const HeatPulseModelParams m{0.058, 0.114, 0.28e-3, 0.0, 0.0};
    const auto late = trajectory(m, kDevice, 1.0);
    CHECK(rel(late.gamma_n, 16305.9) < 1e-4);
    CHECK(rel(late.gamma_n, 1.6e4) < 0.03);
    CHECK(rel(shotnoise::bose_einstein(0.058, kDevice.f_r), 2.1e-3) < 0.01);

    const auto start = trajectory(m, kDevice, 0.0);
    const double n172 = shotnoise::bose_einstein(0.172, kDevice.f_r);
    CHECK(rel(n172, 0.143) < 0.01);
    CHECK(rel(start.gamma_n, shotnoise::dephasing_full(n172, kDevice).gamma_n) < 1e-14);
}

TEST_CASE("trajectory is monotone in the cooling time", "[heatpulse]") {
    const HeatPulseModelParams m{0.058, 0.114, 0.28e-3, 0.0, 0.0};
    auto prev = trajectory(m, kDevice, 0.0);
    for (int i = 1; i <= 500; ++i) {
        const auto p = trajectory(m, kDevice, 1e-5 * i);
        CHECK(p.gamma_n <= prev.gamma_n);
        CHECK(std::abs(p.delta_f) <= std::abs(prev.delta_f));
        prev = p;
    }
}

TEST_CASE("offset calibration", "[heatpulse]") {
    const std::vector<double> tail{2.4e5, 2.5e5, 2.6e5};
    const auto c = calibrate_offset(tail, 1.75e4);
    CHECK(c.offset == Approx(2.325e5).epsilon(1e-14));
    CHECK(c.n_tail == 3);
    CHECK_FALSE(c.low_confidence);
    CHECK(calibrate_offset(std::vector<double>{1.75e4, 1.75e4}, 1.75e4).offset == 0.0);
    const auto single = calibrate_offset(std::vector<double>{3e5}, 1e5);
    CHECK(single.offset == 2e5);
    CHECK(single.low_confidence);
    CHECK_THROWS_AS(calibrate_offset(std::vector<double>{}, 1.0), Error);
}

TEST_CASE("noiseless flexline joint fit", "[heatpulse]") {
    const auto data = scenario(0.058, 0.28e-3, {0.024, 0.055, 0.114}, {}, 1);
    const auto r = fit_cooling(data, kDevice, 0.058);
    CHECK(r.converged);
    CHECK(rel(r.value("tau_cool"), 0.28e-3) < 1e-6);
    CHECK(rel(r.value("delta_T[0]"), 0.024) < 1e-6);
    CHECK(rel(r.value("delta_T[1]"), 0.055) < 1e-6);
    CHECK(rel(r.value("delta_T[2]"), 0.114) < 1e-6);
    CHECK(std::abs(r.value("f0_offset")) < 1e-3);
}

TEST_CASE("noisy coax joint fit", "[heatpulse]") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto data = scenario(0.071, 0.55e-3, {0.020, 0.063, 0.098}, {2e3, 300.0}, seed);
        const auto r = fit_cooling(data, kDevice, 0.071);
        CHECK(rel(r.value("tau_cool"), 0.55e-3) < 0.05);
    }
}

TEST_CASE("single dataset fit uses unindexed names", "[heatpulse]") {
    const auto data = scenario(0.058, 0.28e-3, {0.055}, {}, 2);
    const auto r = fit_cooling(data, kDevice, 0.058);
    CHECK(r.contains("delta_T"));
    CHECK(rel(r.value("tau_cool"), 0.28e-3) < 1e-6);
    const auto joint = fit_cooling(scenario(0.058, 0.28e-3, {0.055, 0.055}, {}, 2), kDevice, 0.058);
    CHECK(rel(joint.value("tau_cool"), r.value("tau_cool")) < 1e-8);
}

TEST_CASE("null heating is consistent with zero", "[heatpulse]") {
    const auto data = scenario(0.058, 0.28e-3, {0.0}, {2e3, 300.0}, 4);
    CoolingOptions opts;
    opts.tau_initial = 0.28e-3;
    opts.lm.throw_on_failure = false;
    const auto r = fit_cooling(data, kDevice, 0.058, opts);
    CHECK(std::abs(r.value("delta_T")) <= 2.0 * r.sigma("delta_T"));
}

TEST_CASE("offset calibration removes the generated offset exactly", "[heatpulse]") {
    for (const double offset : {0.0, 2.325e5, 5e5}) {
        const auto data = scenario(0.058, 0.28e-3, {0.024, 0.055, 0.114}, {}, 3, offset, -150.0);
        const auto a = analyze_cooling(data, kDevice, 0.058, 10e-3);
        CHECK(std::abs(a.calibration.offset - offset) <= 1e-9 * std::max(offset, 1.0) + 1e-9);
        CHECK(rel(a.fit.value("delta_T[0]"), 0.024) < 1e-6);
        CHECK(rel(a.fit.value("delta_T[2]"), 0.114) < 1e-6);
        CHECK(std::abs(a.fit.value("f0_offset") + 150.0) < 1e-3);
    }
}

TEST_CASE("baseline temperature can be fitted", "[heatpulse]") {
    const auto data = scenario(0.058, 0.28e-3, {0.024, 0.055, 0.114}, {}, 5);
    CoolingOptions opts;
    opts.fit_t0 = true;
    const auto r = fit_cooling(data, kDevice, 0.050, opts);
    CHECK(rel(r.value("T0"), 0.058) < 1e-6);
    CHECK(rel(r.value("tau_cool"), 0.28e-3) < 1e-6);
}

TEST_CASE("cooling fit input validation", "[heatpulse]") {
    auto data = scenario(0.058, 0.28e-3, {0.024}, {}, 1);
    CHECK_THROWS_AS(fit_cooling(std::vector<HeatPulseSeries>{}, kDevice, 0.058), Error);
    CHECK_THROWS_AS(fit_cooling(data, kDevice, 0.0), Error);
    data[0].samples.resize(3);
    CHECK_THROWS_AS(fit_cooling(data, kDevice, 0.058), Error);
}
