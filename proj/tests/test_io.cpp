#include <catch_amalgamated.hpp>

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"
#include "linetherm/io.hpp"
#include "linetherm/synth.hpp"

#include <cmath>
#include <filesystem>
#include <string>

using namespace linetherm;
using namespace linetherm::io;

namespace {

Errc code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::InvalidArgument;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "linetherm_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("numbers round trip through text", "[io]") {
    for (const double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.62607015e-34, 7.458e9, -1e-300}) {
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.25) == "0.25");
}

TEST_CASE("schema versions", "[io]") {
    CHECK(schema_version() == "1.0");
    CHECK_NOTHROW(check_schema_version("1.0"));
    CHECK_NOTHROW(check_schema_version("1.7"));
    CHECK_NOTHROW(check_schema_version("1"));
    CHECK(code_of([] { check_schema_version("2.0"); }) == Errc::Schema);
    CHECK(code_of([] { check_schema_version("one"); }) == Errc::Schema);
    CHECK(code_of([] { parse_csv("# schema_version=3.1\nt_s,signal\n0,1\n"); }) == Errc::Schema);
    CHECK(code_of([] { iq_from_text("i,q\n0,0\n1,1\n", R"({"f_q_hz": 5e8, "schema_version": "9.0"})"); }) ==
          Errc::Schema);
}

TEST_CASE("CSV parsing", "[io]") {
    const auto t = parse_csv("# comment\n\nt_s, signal ,sigma\r\n0,1.5,0.1\n1e-6,+0.5,0.1\n");
    CHECK(t.columns == std::vector<std::string>{"t_s", "signal", "sigma"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][0] == 1e-6);
    CHECK(t.rows[1][1] == 0.5);
    CHECK(t.column("sigma") == 2);
    CHECK(code_of([&] { (void)t.column("nope"); }) == Errc::Schema);
    CHECK(code_of([] { parse_csv("a,b\n1\n"); }) == Errc::Schema);
    CHECK(code_of([] { parse_csv("a,b\n1,x\n"); }) == Errc::Schema);
    CHECK(code_of([] { parse_csv(""); }) == Errc::Schema);
}

TEST_CASE("decay trace round trip", "[io]") {
    const auto grid = synth::linspace(0.0, 1e-5, 20);
    auto tr = synth::gen_decay(decoherence::DecayKind::Echo, {1.0, 2.56e5, 0.0}, grid, {0.01}, 1);
    const auto back = decay_from_csv(decay_to_csv(tr), decoherence::DecayKind::Echo);
    CHECK(back.times == tr.times);
    CHECK(back.signal == tr.signal);
    CHECK(back.sigma.empty());
    tr.sigma.assign(grid.size(), 0.01);
    CHECK(decay_from_csv(decay_to_csv(tr), decoherence::DecayKind::Echo).sigma == tr.sigma);
    CHECK(decay_to_csv(tr).rfind("# schema_version=1.0\nt_s,signal,sigma\n", 0) == 0);
    CHECK(code_of([] { decay_from_csv("t,signal\n0,1\n", decoherence::DecayKind::Echo); }) == Errc::Schema);
}

TEST_CASE("heat-pulse files round trip", "[io]") {
    const auto series = synth::gen_heatpulse({0.058, 0.055, 0.28e-3, 1e5, 0.0}, SystemParams::device_default(),
                                             synth::linspace(0.0, 2e-3, 10), {2e3, 300.0}, 3, 1e-4);
    const auto path = scratch("hp.csv");
    write_heatpulse(path, series);
    CHECK(std::filesystem::exists(scratch("hp.json")));
    const auto back = read_heatpulse(path);
    CHECK(back.t_heat == 1e-4);
    REQUIRE(back.samples.size() == series.samples.size());
    for (std::size_t i = 0; i < back.samples.size(); ++i) {
        CHECK(back.samples[i].gamma2_star == series.samples[i].gamma2_star);
        CHECK(back.samples[i].delta_f == series.samples[i].delta_f);
    }
    // The sidecar is optional for heat-pulse data.
    const auto no_meta = heatpulse_from_text(heatpulse_to_csv(series), std::nullopt);
    CHECK(no_meta.t_heat == 0.0);
}

TEST_CASE("fin files round trip", "[io]") {
    const auto exp = synth::gen_fin(1.0, 1.6e4, {0.045, 0.025, 1e-3}, 0.1, std::vector<double>{1e-6, 2e-6}, {}, 1);
    const auto path = scratch("fin.csv");
    write_fin(path, exp);
    const auto back = read_fin(path);
    CHECK(back.l_c == 0.045);
    CHECK(back.d_hc == 0.025);
    CHECK(back.w == 1e-3);
    REQUIRE(back.records.size() == 2);
    CHECK(back.records[1].t_h == exp.records[1].t_h);
    CHECK(code_of([] { fin_from_text("p_heat_w,t_h_k,t_o_k,t_d_k\n", R"({"d_hc_m": 0.01})"); }) == Errc::Schema);
}

TEST_CASE("IQ and phase files round trip", "[io]") {
    const auto cloud = synth::gen_iq(synth::thermal_mixture(0.03, 5e8, 4.0, 1.0), 100, 5e8, 2);
    const auto iq_path = scratch("iq.csv");
    write_iq(iq_path, cloud);
    const auto iq_back = read_iq(iq_path);
    CHECK(iq_back.f_q == 5e8);
    CHECK(iq_back.points == cloud.points);
    CHECK(code_of([] { iq_from_text("i,q\n0,0\n1,1\n", "{}"); }) == Errc::Schema);

    synth::PhaseParams p;
    p.f_g = 7.4593e9;
    p.f_e = 7.45664e9;
    p.kappa_g = p.kappa_e = two_pi * 4e6;
    p.n_bar_readout = 0.16;
    const auto sweep = synth::gen_phase(p, synth::linspace(7.44e9, 7.47e9, 31), 0.01, 1);
    const auto ph_path = scratch("phase.csv");
    write_phase(ph_path, sweep);
    const auto ph_back = read_phase(ph_path);
    CHECK(ph_back.n_bar_readout == 0.16);
    CHECK(ph_back.phase_e == sweep.phase_e);
}

TEST_CASE("system parameter documents", "[io]") {
    const auto sys = system_params_from_json(
        R"({"f_r_hz": 7.458e9, "kappa_over_2pi_hz": 4.10e6, "chi_over_2pi_hz": -2.70e6})");
    CHECK(sys == SystemParams::device_default());
    CHECK(system_params_from_json(system_params_to_json(sys)) == sys);

    const auto resolved = system_params_from_json(
        R"({"f_r_hz": 7.458e9, "kappa_over_2pi_hz": 4.13e6, "chi_over_2pi_hz": -2.66e6,
            "kappa_g_over_2pi_hz": 3.79e6, "kappa_e_over_2pi_hz": 4.47e6, "schema_version": "1.0"})");
    CHECK(resolved.kappa_g.has_value());
    CHECK(code_of([] { system_params_from_json(R"({"f_r_hz": 7.458e9})"); }) == Errc::Schema);
    CHECK(code_of([] { system_params_from_json("[1,2]"); }) == Errc::Schema);
    CHECK(code_of([] { system_params_from_json("{not json"); }) == Errc::Schema);
    CHECK(code_of([] {
              system_params_from_json(R"({"f_r_hz": 7.458e9, "kappa_over_2pi_hz": 0, "chi_over_2pi_hz": 1})");
          }) == Errc::InvalidArgument);
    CHECK(code_of([] { read_system_params("/nonexistent/params.json"); }) == Errc::Io);
}
