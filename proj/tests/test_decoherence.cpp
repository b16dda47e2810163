#include <catch_amalgamated.hpp>

#include "linetherm/decoherence.hpp"
#include "linetherm/error.hpp"
#include "linetherm/random.hpp"
#include "linetherm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace linetherm;
using namespace linetherm::decoherence;
using linetherm::synth::DecayNoise;
using linetherm::synth::DecayParams;

namespace {

double rel(double a, double b) { return std::abs(a / b - 1.0); }

std::vector<double> grid(double t_max, std::size_t n) { return synth::linspace(0.0, t_max, n); }

}  // namespace

TEST_CASE("noiseless relaxation recovery", "[decoherence]") {
    const auto tr = synth::gen_decay(DecayKind::Relaxation, {1.0, 4.77e5, 0.0}, grid(10e-6, 100), {}, 1);
    const auto r = fit_relaxation(tr);
    CHECK(r.converged);
    CHECK(rel(r.value("gamma1"), 4.77e5) < 1e-8);
    CHECK(rel(r.value("A"), 1.0) < 1e-8);
    CHECK(std::abs(r.value("B")) < 1e-8);
}

TEST_CASE("noisy relaxation recovery", "[decoherence]") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto tr = synth::gen_decay(DecayKind::Relaxation, {1.0, 4.77e5, 0.0}, grid(10e-6, 100), {0.01}, seed);
        const auto r = fit_relaxation(tr);
        CHECK(r.converged);
        CHECK(rel(r.value("gamma1"), 4.77e5) < 0.02);
    }
}

TEST_CASE("flat relaxation trace is flagged", "[decoherence]") {
    DecayTrace tr{DecayKind::Relaxation, grid(10e-6, 50), std::vector<double>(50, 0.3), {}};
    const auto r = fit_relaxation(tr);
    CHECK_FALSE(r.converged);
}

TEST_CASE("noiseless Ramsey recovery", "[decoherence]") {
    const DecayParams p{0.5, 3.35e5, 0.5, 250e3, 0.4};
    const auto tr = synth::gen_decay(DecayKind::Ramsey, p, grid(10e-6, 200), {}, 3);
    const auto r = fit_ramsey(tr);
    CHECK(r.converged);
    CHECK(rel(r.value("gamma2_star"), 3.35e5) < 1e-6);
    CHECK(rel(r.value("detuning"), 250e3) < 1e-6);
    CHECK(std::abs(r.value("phase") - 0.4) < 1e-6);
    CHECK(rel(r.value("A"), 0.5) < 1e-6);
    CHECK(r.warnings.empty());
}

TEST_CASE("Ramsey amplitude sign and phase wrapping", "[decoherence]") {
    const DecayParams p{0.5, 3.35e5, 0.0, 250e3, 3.0};
    const auto tr = synth::gen_decay(DecayKind::Ramsey, p, grid(10e-6, 200), {}, 3);
    const auto r = fit_ramsey(tr);
    CHECK(r.value("A") >= 0.0);
    CHECK(r.value("phase") > -M_PI);
    CHECK(r.value("phase") <= M_PI);
    CHECK(std::abs(r.value("phase") - 3.0) < 1e-6);
}

TEST_CASE("fringe-free Ramsey trace", "[decoherence]") {
    const auto tr = synth::gen_decay(DecayKind::Ramsey, {1.0, 3.35e5, 0.0, 0.0, 0.0}, grid(10e-6, 100), {}, 1);
    const auto r = fit_ramsey(tr);
    CHECK(rel(r.value("gamma2_star"), 3.35e5) < 1e-6);
    CHECK(std::abs(r.value("detuning")) < 1.0);
}

TEST_CASE("alias warning tracks the Nyquist limit", "[decoherence]") {
    // 20 points over 10 us -> Nyquist ~0.95 MHz; a 3 MHz fringe aliases.
    const auto tr = synth::gen_decay(DecayKind::Ramsey, {1.0, 1e5, 0.0, 3e6, 0.0}, grid(10e-6, 20), {}, 1);
    const auto r = fit_ramsey(tr);
    const bool above = std::abs(r.value("detuning")) > 0.5 / (10e-6 / 19);
    bool warned = false;
    for (const auto& w : r.warnings) warned |= w.rfind("AliasWarning", 0) == 0;
    CHECK(warned == above);
}

TEST_CASE("Ramsey detuning jitter is reproduced", "[decoherence]") {
    std::vector<double> det;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        DecayNoise n{0.01, 1.0e3};
        const auto tr = synth::gen_decay(DecayKind::Ramsey, {0.5, 3.35e5, 0.5, 250e3, 0.0}, grid(10e-6, 200), n, seed);
        det.push_back(fit_ramsey(tr).value("detuning"));
    }
    const auto s = summarize_rates(det);
    CHECK(std::abs(s.mean - 250e3) < 3.0 * 1.1e3 / 10.0);
    CHECK(s.sigma > 0.8e3);
    CHECK(s.sigma < 1.2e3);
}

TEST_CASE("noiseless and noisy echo recovery", "[decoherence]") {
    const auto tr = synth::gen_decay(DecayKind::Echo, {0.8, 2.56e5, 0.1}, grid(15e-6, 100), {}, 1);
    const auto r = fit_echo(tr);
    CHECK(rel(r.value("gamma2_echo"), 2.56e5) < 1e-8);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto noisy = synth::gen_decay(DecayKind::Echo, {0.8, 2.56e5, 0.1}, grid(15e-6, 100), {0.01}, seed);
        CHECK(rel(fit_echo(noisy).value("gamma2_echo"), 2.56e5) < 0.03);
    }
}

TEST_CASE("zero-amplitude echo is flagged", "[decoherence]") {
    const auto tr = synth::gen_decay(DecayKind::Echo, {0.0, 2.56e5, 0.1}, grid(15e-6, 100), {}, 1);
    CHECK_FALSE(fit_echo(tr).converged);
}

TEST_CASE("fit dispatch and kind checks", "[decoherence]") {
    const auto tr = synth::gen_decay(DecayKind::Echo, {0.8, 2.56e5, 0.1}, grid(15e-6, 40), {}, 1);
    CHECK(fit_trace(tr).contains("gamma2_echo"));
    CHECK_THROWS_AS(fit_relaxation(tr), Error);
    CHECK(rate_parameter(DecayKind::Ramsey) == "gamma2_star");
    CHECK(decay_kind_from_string("echo") == DecayKind::Echo);
    CHECK_THROWS_AS(decay_kind_from_string("hahn"), Error);
    DecayTrace small{DecayKind::Relaxation, {0.0, 1.0, 2.0}, {1.0, 0.5, 0.25}, {}};
    CHECK_THROWS_AS(fit_relaxation(small), Error);
}

TEST_CASE("pure dephasing arithmetic", "[decoherence]") {
    CHECK(pure_dephasing(2.56e5, 4.77e5) == 1.75e4);
    CHECK(pure_dephasing(0.5 * 4.77e5, 4.77e5) == 0.0);
    CHECK(std::abs(pure_dephasing(2.7e4 + 0.5 * 4.77e5, 4.77e5) - 2.7e4) <= 4e-12 * 2.7e4 + 1e-9);
    CHECK_THROWS_AS(pure_dephasing(1e5, 4.77e5), Error);

    // pure_dephasing(g2, g1) + g1/2 reproduces g2 (exact when the subtraction is
    // exact, otherwise to the last unit in the last place).
    Stream rng(7, "test.dephasing");
    for (int i = 0; i < 1000; ++i) {
        const double g1 = 1e6 * rng.uniform();
        const double g2 = 0.5 * g1 + 1e6 * rng.uniform();
        const double back = pure_dephasing(g2, g1) + 0.5 * g1;
        CHECK(std::abs(back - g2) <= std::nextafter(g2, 2 * g2) - g2);
        if (g2 <= g1 && g2 >= 0.25 * g1) CHECK(back == g2);
    }
}

TEST_CASE("rate summaries", "[decoherence]") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const auto s = summarize_rates(a);
    CHECK(s.mean == 2.0);
    CHECK(std::abs(s.sigma - std::sqrt(2.0 / 3.0)) < 1e-15);
    CHECK(s.n_samples == 3);
    const std::vector<double> same(5, 4.2);
    CHECK(summarize_rates(same).sigma == 0.0);
    CHECK_THROWS_AS(summarize_rates(std::vector<double>{1.0}), Error);

    Stream rng(11, "test.summary");
    std::vector<double> samples;
    for (int i = 0; i < 1000; ++i) samples.push_back(rng.normal(4.77e5, 9e3));
    CHECK(std::abs(summarize_rates(samples).mean - 4.77e5) < 3.0 * 9e3 / std::sqrt(1000.0));
}

TEST_CASE("time-unit rescaling leaves Gamma t invariant", "[decoherence]") {
    auto tr = synth::gen_decay(DecayKind::Relaxation, {1.0, 4.77e5, 0.05}, grid(10e-6, 100), {0.01}, 9);
    const double gt_s = fit_relaxation(tr).value("gamma1") * 1e-6;
    for (auto& t : tr.times) t *= 1e6;
    const double gt_us = fit_relaxation(tr).value("gamma1");
    CHECK(rel(gt_us, gt_s) < 1e-9);
}
