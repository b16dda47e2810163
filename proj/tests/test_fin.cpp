#include <catch_amalgamated.hpp>

#include "linetherm/error.hpp"
#include "linetherm/fin.hpp"
#include "linetherm/random.hpp"
#include "linetherm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace linetherm;
using namespace linetherm::fin;

namespace {

constexpr double kLong = 0.045;  // clamp length (m)
constexpr double kDhc = 0.025;   // heater-side thermometer distance (m)

double rel(double a, double b) { return std::abs(a / b - 1.0); }

double max_profile_error(const FinParams& p, std::size_t n) {
    const auto sol = solve_discrete(p, n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rise = analytic_profile(p, sol.positions[i]) - p.t_d;
        worst = std::max(worst, std::abs((sol.profile[i] - p.t_d) / rise - 1.0));
    }
    return worst;
}

FinExperiment experiment(double u, double g, const std::vector<double>& powers, double noise = 0.0,
                         std::uint64_t seed = 1) {
    return synth::gen_fin(u, g, {kLong, kDhc, 1e-3}, 0.1, powers, {noise, 0.0}, seed);
}

const std::vector<double> kPowers{0.5e-6, 1e-6, 1.5e-6, 2e-6, 2.5e-6, 3e-6};

}  // namespace

TEST_CASE("no heating leaves the strip at the clamp temperature", "[fin]") {
    const auto sol = solve_discrete({1e4, 1e4, kLong, kDhc, 0.1, 0.0}, 50);
    for (const double t : sol.profile) CHECK(t == 0.1);
    CHECK(sol.t_h == 0.1);
    CHECK(sol.t_o == 0.1);
}

TEST_CASE("weak strip resistance approaches the contact resistance", "[fin]") {
    const FinParams p{1e-6, 1e6, kLong, 0.0, 0.1, 1e-6};
    const auto sol = solve_discrete(p, 1000);
    CHECK(rel((sol.t_o - p.t_d) / p.p_heat, p.r_t) < 1e-3);
    CHECK(rel(predicted_diffs(p).slope_o, p.r_t) < 1e-12);
}

TEST_CASE("discrete profile matches the continuum solution", "[fin]") {
    for (const double u : {0.1, 1.0, 5.0}) {
        const auto p = FinParams::from_shape(u, 1e4, kLong, kDhc, 0.1, 1e-6);
        CHECK(max_profile_error(p, 10000) < 1e-4);
        const auto sol = solve_discrete(p, 10000);
        const auto s = predicted_diffs(p);
        CHECK(rel((sol.t_h - p.t_d) / p.p_heat, s.slope_h) < 1e-4);
        CHECK(rel((sol.t_o - p.t_d) / p.p_heat, s.slope_o) < 1e-4);
    }
}

TEST_CASE("discretization error is second order", "[fin]") {
    const auto p = FinParams::from_shape(2.0, 1e4, kLong, kDhc, 0.1, 1e-6);
    const double e1 = max_profile_error(p, 100);
    const double e2 = max_profile_error(p, 200);
    const double e3 = max_profile_error(p, 400);
    CHECK(e1 / e2 >= 3.0);
    CHECK(e2 / e3 >= 3.0);
}

TEST_CASE("discrete energy balance", "[fin]") {
    for (const double u : {0.05, 1.0, 4.0}) {
        const auto p = FinParams::from_shape(u, 1.6e4, kLong, kDhc, 0.1, 2e-6);
        const std::size_t n = 500;
        const auto sol = solve_discrete(p, n);
        double out = 0.0;
        for (const double t : sol.profile) out += (t - p.t_d) / (p.r_t * static_cast<double>(n));
        CHECK(rel(out, p.p_heat) < 1e-10);
    }
}

TEST_CASE("analytic profile boundary conditions", "[fin]") {
    const FinParams p{1e4, 1e4, kLong, kDhc, 0.1, 1e-6};
    const auto s = predicted_diffs(p);
    CHECK(rel(analytic_profile(p, kLong) - p.t_d, p.p_heat * s.slope_o) < 1e-14);
    const double h = 1e-6 * kLong;
    const double d_end = (analytic_profile(p, kLong) - analytic_profile(p, kLong - h)) / h;
    CHECK(std::abs(d_end) < 1e-6 * p.r_s * p.p_heat / kLong);
    const double d0 = (analytic_profile(p, h) - analytic_profile(p, 0.0)) / h;
    CHECK(rel(d0, -p.r_s * p.p_heat / kLong) < 1e-5);
    const double dc = (analytic_profile(p, 2 * h) - analytic_profile(p, 0.0)) / (2 * h);
    const double d0c = 2.0 * d0 - dc;  // Richardson-extrapolated one-sided derivative
    CHECK(rel(d0c, -p.r_s * p.p_heat / kLong) < 1e-6);
    CHECK_THROWS_AS(analytic_profile(p, -1e-3), Error);
}

TEST_CASE("small-u series branch is continuous", "[fin]") {
    for (const double u : {1e-8, 5e-5, 9.99e-5, 1.0001e-4, 2e-4}) {
        const auto p = FinParams::from_shape(u, 1e4, kLong, kDhc, 0.1, 1e-6);
        const auto s = predicted_diffs(p);
        CHECK(rel(s.slope_o, p.r_t * u / std::sinh(u)) < 1e-12);
        CHECK(rel(s.slope_h, p.r_t * u / std::tanh(u) + kDhc / kLong * p.r_s) < 1e-12);
    }
}

TEST_CASE("ratio function", "[fin]") {
    CHECK(ratio_function(0.0, 0.3) == 1.0);
    CHECK(std::abs(ratio_function(1.0, 25.0 / 45.0) - 2.196) < 1e-3);
    CHECK(std::abs(ratio_function(1.0, 25.0 / 45.0) - 2.195970) < 1e-6);
    const auto p = FinParams::from_shape(1.0, 1.6e4, kLong, kDhc, 0.1, 0.0);
    const auto s = predicted_diffs(p);
    CHECK(rel(s.slope_h / s.slope_o, ratio_function(1.0, kDhc / kLong)) < 1e-14);
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = ratio_function(0.01 * i, 0.5);
        if (i > 0) CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("ratio inversion", "[fin]") {
    CHECK(invert_ratio(1.0, 0.5) == 0.0);
    CHECK(std::abs(invert_ratio(2.196, 0.5556) - 1.0) < 1e-3);
    CHECK(std::abs(invert_ratio(ratio_function(3.7, 0.5), 0.5) - 3.7) < 1e-10);
    for (int i = 1; i <= 100; ++i) {
        const double u = 0.1 * i;
        for (const double d : {0.0, 0.25, 25.0 / 45.0, 2.0}) {
            CHECK(std::abs(invert_ratio(ratio_function(u, d), d) - u) <= 1e-10 * u);
        }
    }
    try {
        invert_ratio(0.99, 0.5);
        FAIL("expected RatioBelowOne");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::RatioBelowOne);
    }
}

TEST_CASE("origin-constrained slopes", "[fin]") {
    std::vector<PowerPoint> pts;
    for (int i = 1; i <= 5; ++i) pts.push_back({1e-6 * i, 5000.0 * 1e-6 * i});
    CHECK(rel(fit_origin_slope(pts, 1.0), 5000.0) < 1e-14);

    std::vector<PowerPoint> data{{1e-6, 5.1e-3}, {2e-6, 9.9e-3}, {5e-6, 26e-3}};
    const double s = fit_origin_slope(data, 3e-6);
    CHECK(rel(s, 4980.0) < 1e-12);
    data.push_back({10e-6, 80e-3});
    CHECK(fit_origin_slope(data, 3e-6) == s);
    try {
        fit_origin_slope(data, 0.5e-6);
        FAIL("expected NoPointsBelowThreshold");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoPointsBelowThreshold);
    }
}

TEST_CASE("noiseless resistance extraction", "[fin]") {
    const auto ex = extract_resistances(experiment(1.0, 1.6e4, kPowers), 3e-6);
    CHECK(std::abs(ex.u - 1.0) < 1e-8);
    CHECK(rel(ex.g, 1.6e4) < 1e-8);
    CHECK(rel(ex.r_s(), 1.6e4) < 1e-8);
    CHECK(rel(ex.r_t(), 1.6e4) < 1e-8);
    CHECK(ex.threshold == 3e-6);
}

TEST_CASE("extraction inverts the forward model", "[fin]") {
    for (int i = 0; i <= 30; ++i) {
        const double u = 0.05 * std::pow(100.0, i / 30.0);
        const auto ex = extract_resistances(experiment(u, 2e4, kPowers), 3e-6);
        CHECK(std::abs(ex.u / u - 1.0) < 1e-8);
        CHECK(rel(ex.g, 2e4) < 1e-8);
    }
}

TEST_CASE("points above the threshold are ignored", "[fin]") {
    auto exp = experiment(1.0, 1.6e4, kPowers);
    exp.records.push_back({10e-6, 0.5, 0.3, 0.1});  // nonlinear regime
    const auto ex = extract_resistances(exp, 3e-6);
    CHECK(std::abs(ex.u - 1.0) < 1e-8);
}

TEST_CASE("noisy resistance extraction", "[fin]") {
    std::vector<double> powers;
    for (int i = 1; i <= 30; ++i) powers.push_back(0.1e-6 * i);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ex = extract_resistances(experiment(1.0, 1.6e4, powers, 0.05, seed), 3e-6);
        CHECK(std::abs(ex.u - 1.0) < 0.15);
        CHECK(rel(ex.g, 1.6e4) < 0.10);
    }
}

TEST_CASE("degenerate slope ratios", "[fin]") {
    FinExperiment same{kLong, kDhc, 0.0, {{1e-6, 0.11, 0.11, 0.1}, {2e-6, 0.12, 0.12, 0.1}}};
    try {
        extract_resistances(same, 3e-6);
        FAIL("expected UnphysicalRatio");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnphysicalRatio);
    }
    same.d_hc = 0.0;
    const auto ex = extract_resistances(same, 3e-6);
    CHECK(ex.u == 0.0);

    FinExperiment inverted{kLong, kDhc, 0.0, {{1e-6, 0.105, 0.11, 0.1}, {2e-6, 0.11, 0.12, 0.1}}};
    CHECK_THROWS_AS(extract_resistances(inverted, 3e-6), Error);
    FinExperiment single{kLong, kDhc, 0.0, {{1e-6, 0.12, 0.11, 0.1}}};
    CHECK_THROWS_AS(extract_resistances(single, 3e-6), Error);
}

TEST_CASE("inverse-temperature scaling", "[fin]") {
    std::vector<InversePoint> exact;
    for (const double t : {0.02, 0.1, 1.0, 20.0}) exact.push_back({t, 1600.0 / t});
    CHECK(rel(fit_inverse_t(exact), 1600.0) < 1e-14);
    CHECK(rel(fit_inverse_t(std::vector<InversePoint>{{0.05, 32000.0}}), 1600.0) < 1e-14);
    CHECK_THROWS_AS(fit_inverse_t(std::vector<InversePoint>{}), Error);

    Stream rng(5, "test.inverse_t");
    std::vector<InversePoint> noisy;
    for (int i = 0; i < 10; ++i) {
        const double t = 0.02 + 0.02 * i;
        noisy.push_back({t, 1600.0 / t * (1.0 + 0.05 * rng.normal())});
    }
    CHECK(rel(fit_inverse_t(noisy), 1600.0) < 0.05);
}

TEST_CASE("fin parameter validation", "[fin]") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(solve_discrete({1e4, 1e4, kLong, kDhc, 0.1, 1e-6}, 1), Error);
    try {
        solve_discrete({1e4, inf, kLong, kDhc, 0.1, 1e-6}, 10);
        FAIL("expected SingularSystem");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SingularSystem);
    }
    CHECK_NOTHROW(solve_discrete({1e4, inf, kLong, kDhc, 0.1, 0.0}, 10));
    CHECK_THROWS_AS(solve_discrete({1e4, 0.0, kLong, kDhc, 0.1, 1e-6}, 10), Error);
    const auto p = FinParams::from_shape(2.0, 3e4, kLong, kDhc, 0.1, 0.0);
    CHECK(rel(p.shape(), 2.0) < 1e-15);
    CHECK(rel(p.magnitude(), 3e4) < 1e-15);
}
