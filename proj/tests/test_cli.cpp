#include <catch_amalgamated.hpp>

#include "linetherm/cli.hpp"
#include "linetherm/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;

    json report() const { return json::parse(out); }
    json error() const { return json::parse(err); }
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "linetherm");
    std::ostringstream out, err;
    const int code = linetherm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

/// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("linetherm_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string p(const fs::path& path) { return path.string(); }

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST_CASE("shotnoise converts dephasing rates to photon numbers", "[cli]") {
    const auto r = run({"--no-timestamp", "shotnoise", "--gamma", "7e3", "27e3"});
    REQUIRE(r.code == 0);
    const auto rows = r.report()["rows"];
    REQUIRE(rows.size() == 2);
    CHECK(rel(rows[0]["n_bar"].get<double>(), 0.9e-3) < 0.10);
    CHECK(rel(rows[1]["n_bar"].get<double>(), 3.5e-3) < 0.05);
    CHECK(rows[0]["gamma_per_s"].get<double>() == 7e3);
}

TEST_CASE("shotnoise with zero photons gives a zero rate", "[cli]") {
    const auto r = run({"--no-timestamp", "shotnoise", "--nbar", "0"});
    REQUIRE(r.code == 0);
    const auto row = r.report()["rows"][0];
    CHECK(row["gamma_per_s"].get<double>() == 0.0);
    CHECK(row["delta_f_hz"].get<double>() == 0.0);
    CHECK(row["t_k"].get<double>() == 0.0);
}

TEST_CASE("shotnoise reports the black-body temperature", "[cli]") {
    const auto r = run({"--no-timestamp", "shotnoise", "--nbar", "6.5e-3", "--as-temperature"});
    REQUIRE(r.code == 0);
    const auto row = r.report()["rows"][0];
    CHECK(std::abs(row["t_k"].get<double>() - 0.071) < 1e-3);
    CHECK_FALSE(row.contains("gamma_per_s"));

    const auto mk = run({"--no-timestamp", "shotnoise", "--temperature-mk", "71"});
    REQUIRE(mk.code == 0);
    CHECK(rel(mk.report()["rows"][0]["n_bar"].get<double>(), 6.5e-3) < 0.03);
}

TEST_CASE("CSV report embeds the manifest as a comment", "[cli]") {
    const auto r = run({"--no-timestamp", "--format", "csv", "shotnoise", "--nbar", "1e-3", "2e-3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# manifest=") != std::string::npos);
    const auto table = linetherm::io::parse_csv(r.out);
    CHECK(table.columns == std::vector<std::string>{"gamma_per_s", "delta_f_hz", "n_bar", "t_k"});
    CHECK(table.rows.size() == 2);
}

TEST_CASE("validation failures exit with 2 and a JSON error", "[cli]") {
    const auto neg = run({"shotnoise", "--nbar", "-1"});
    CHECK(neg.code == linetherm::cli::kExitValidation);
    CHECK(neg.out.empty());
    const auto e = neg.error()["error"];
    CHECK(e["code"] == "InvalidArgument");
    CHECK(e["exit_code"] == 2);

    const auto usage = run({"shotnoise", "--no-such-flag"});
    CHECK(usage.code == 2);
    CHECK(usage.error()["error"]["code"] == "UsageError");

    const auto missing = run({"decay", "/definitely/not/here.csv"});
    CHECK(missing.code == 2);

    const auto nothing = run({"shotnoise"});
    CHECK(nothing.code == 2);

    const auto both = run({"heatpulse", "--t0-k", "0.058", "--t0-mk", "58", "x.csv"});
    CHECK(both.code == 2);
}

TEST_CASE("numerical failures exit with 3", "[cli]") {
    const auto dir = scratch("numerical");
    const auto cloud = dir / "cloud.csv";
    REQUIRE(run({"-o", p(dir / "synth.json"), "synth", "iq", "--seed", "4", "--n-points", "4000", "--out", p(cloud)}).code == 0);
    const auto r = run({"iqtemp", "--max-iterations", "2", p(cloud)});
    CHECK(r.code == linetherm::cli::kExitNumerical);
    CHECK(r.error()["error"]["code"] == "NonConvergence");
}

TEST_CASE("help lists every flag", "[cli]") {
    const auto r = run({"heatpulse", "--help"});
    CHECK(r.code == 0);
    for (const char* flag : {"--t0-mk", "--t0-k", "--tail-start-ms", "--baseline-per-s", "--fit-t0", "--emit-curve"}) {
        CHECK(r.out.find(flag) != std::string::npos);
    }
    const auto top = run({"--help"});
    CHECK(top.code == 0);
    for (const char* cmd : {"shotnoise", "decay", "heatpulse", "fin", "iqtemp", "resonator", "synth"}) {
        CHECK(top.out.find(cmd) != std::string::npos);
    }
}

TEST_CASE("heat-pulse pipeline recovers the cooling time", "[cli]") {
    const auto dir = scratch("heatpulse");
    std::vector<std::string> files;
    for (const char* dt : {"24", "55", "114"}) {
        const auto f = p(dir / (std::string("hp") + dt + ".csv"));
        const auto g = run({"-o", p(dir / "synth.json"), "synth", "heatpulse", "--t0-mk", "58", "--tau-ms", "0.28",
                            "--delta-t-mk", dt, "--seed", dt, "--out", f});
        REQUIRE(g.code == 0);
        files.push_back(f);
    }
    std::vector<std::string> args{"--no-timestamp", "heatpulse", "--t0-mk", "58", "--emit-curve", p(dir / "curve.csv")};
    args.insert(args.end(), files.begin(), files.end());
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const auto rep = r.report();
    CHECK(rel(rep["tau_cool_ms"].get<double>(), 0.28) < 1e-6);
    CHECK(rel(rep["fit"]["params"]["delta_T[2]"].get<double>(), 0.114) < 1e-6);
    CHECK(rep["fit"]["converged"] == true);
    CHECK(rep["fit"]["covariance"].size() == rep["fit"]["names"].size());
    CHECK(rep["manifest"]["inputs"].size() == 3);

    const auto curve = linetherm::io::parse_csv(linetherm::io::read_text(dir / "curve.csv"));
    CHECK(curve.has_column("gamma2_star_per_s"));
    CHECK(curve.rows.size() > 1000);
}

TEST_CASE("fin extraction recovers the generating resistances", "[cli]") {
    const auto dir = scratch("fin");
    const auto f = p(dir / "fin.csv");
    REQUIRE(run({"-o", p(dir / "synth.json"), "synth", "fin", "--u", "1.3", "--g", "2e4", "--out", f}).code == 0);
    const auto r = run({"--no-timestamp", "fin", "extract", "--threshold-uw", "3", f});
    REQUIRE(r.code == 0);
    CHECK(rel(r.report()["u"].get<double>(), 1.3) < 1e-8);
    CHECK(rel(r.report()["g_k_per_w"].get<double>(), 2e4) < 1e-8);

    const auto none = run({"fin", "extract", "--threshold-uw", "0.1", f});
    CHECK(none.code == 2);
    CHECK(none.error()["error"]["code"] == "NoPointsBelowThreshold");
}

TEST_CASE("fin solve matches the continuum profile", "[cli]") {
    const auto r = run({"--no-timestamp", "fin", "solve", "--r-s", "1e4", "--r-t", "1e4", "--p-uw", "1", "--sites", "10000"});
    REQUIRE(r.code == 0);
    const auto rep = r.report();
    const double t_d = 0.1;
    CHECK(rel(rep["t_o_k"].get<double>() - t_d, rep["analytic_t_o_k"].get<double>() - t_d) < 1e-4);
    CHECK(rel(rep["t_h_k"].get<double>() - t_d, rep["analytic_t_h_k"].get<double>() - t_d) < 1e-4);
}

TEST_CASE("iqtemp recovers the qubit temperature", "[cli]") {
    const auto dir = scratch("iq");
    const auto f = p(dir / "cloud.csv");
    REQUIRE(run({"-o", p(dir / "synth.json"), "synth", "iq", "--t-mk", "26.4", "--seed", "11", "--out", f}).code == 0);
    const auto r = run({"--no-timestamp", "iqtemp", "--seed", "2", f});
    REQUIRE(r.code == 0);
    CHECK(std::abs(r.report()["mean_t_q_k"].get<double>() - 0.0264) < 2e-3);
    CHECK(r.report()["manifest"]["seed"] == 2);
}

TEST_CASE("resonator fit and chi extrapolation", "[cli]") {
    const auto dir = scratch("resonator");
    const auto f = p(dir / "phase.csv");
    REQUIRE(run({"-o", p(dir / "synth.json"), "synth", "phase", "--out", f}).code == 0);
    const auto r = run({"--no-timestamp", "resonator", "fit", f, "--emit-curve", p(dir / "curve.csv")});
    REQUIRE(r.code == 0);
    CHECK(rel(r.report()["chi_over_2pi_hz"].get<double>(), -2.66e6) < 1e-6);
    CHECK(rel(r.report()["kappa_e_over_2pi_hz"].get<double>(), 4.47e6) < 1e-6);
    CHECK(fs::exists(dir / "curve.csv"));

    linetherm::io::CsvTable trend;
    trend.columns = {"n_bar", "chi_over_2pi_hz"};
    trend.rows = {{0.5, -2.68e6}, {1.0, -2.66e6}};
    linetherm::io::write_text(dir / "trend.csv", linetherm::io::render_csv(trend));
    const auto x = run({"--no-timestamp", "resonator", "extrapolate", p(dir / "trend.csv")});
    REQUIRE(x.code == 0);
    CHECK(std::abs(x.report()["chi0_over_2pi_hz"].get<double>() - -2.70e6) < 1e-3);
    CHECK(x.report()["linear_fallback"] == true);
}

TEST_CASE("decay fits and summarizes several traces", "[cli]") {
    const auto dir = scratch("decay");
    std::vector<std::string> args{"--no-timestamp", "decay", "--kind", "echo", "--gamma1", "4.77e5"};
    for (int seed = 1; seed <= 3; ++seed) {
        const auto f = p(dir / ("echo" + std::to_string(seed) + ".csv"));
        REQUIRE(run({"-o", p(dir / "synth.json"), "synth", "decay", "--kind", "echo", "--rate-per-s", "3.35e5", "--sigma",
                     "0.005", "--seed", std::to_string(seed), "--out", f})
                    .code == 0);
        args.push_back(f);
    }
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const auto rep = r.report();
    CHECK(rep["fits"].size() == 3);
    CHECK(rep["rate_parameter"] == "gamma2_echo");
    CHECK(rel(rep["summary"]["mean_per_s"].get<double>(), 3.35e5) < 0.02);
    CHECK(rep["fits"][0].contains("gamma_phi_per_s"));
}

TEST_CASE("reports are byte-stable without timestamps", "[cli]") {
    const auto a = run({"--no-timestamp", "shotnoise", "--gamma", "1e4"});
    const auto b = run({"--no-timestamp", "shotnoise", "--gamma", "1e4"});
    CHECK(a.out == b.out);
    CHECK_FALSE(a.report()["manifest"].contains("timestamp"));
    const auto c = run({"shotnoise", "--gamma", "1e4"});
    CHECK(c.report()["manifest"].contains("timestamp"));
    CHECK(c.report()["manifest"]["tool_version"] == linetherm::cli::tool_version());
    CHECK(c.report()["manifest"]["overrides"].contains("--gamma"));
}

TEST_CASE("synth is deterministic per seed", "[cli]") {
    const auto dir = scratch("synth");
    // Each generator with its noise switched on, so that seeds matter.
    const std::vector<std::pair<std::string, std::vector<std::string>>> kinds{
        {"decay", {"--sigma", "0.01"}},
        {"heatpulse", {"--sigma-gamma-per-s", "1e3"}},
        {"fin", {"--noise-relative", "0.05"}},
        {"iq", {"--n-points", "2000"}},
        {"phase", {"--noise-rad", "0.01"}},
    };
    for (const auto& [k, noise] : kinds) {
        auto gen = [&, k = k, noise = noise](const std::string& seed, const std::string& suffix) {
            std::vector<std::string> args{"-o", p(dir / "r.json"), "synth", k, "--seed", seed, "--out",
                                          p(dir / (k + suffix + ".csv"))};
            args.insert(args.end(), noise.begin(), noise.end());
            return run(args).code;
        };
        REQUIRE(gen("5", "_a") == 0);
        REQUIRE(gen("5", "_b") == 0);
        REQUIRE(gen("6", "_c") == 0);
        const auto a = linetherm::io::read_text(dir / (k + "_a.csv"));
        CHECK(a == linetherm::io::read_text(dir / (k + "_b.csv")));
        CHECK(a != linetherm::io::read_text(dir / (k + "_c.csv")));
    }
}

TEST_CASE("system parameters come from the flag or the environment", "[cli]") {
    const auto dir = scratch("sysparams");
    linetherm::SystemParams sys = linetherm::SystemParams::device_default();
    sys.f_r = 5e9;
    linetherm::io::write_text(dir / "sys.json", linetherm::io::system_params_to_json(sys));

    const auto base = run({"--no-timestamp", "shotnoise", "--nbar", "1e-2", "--as-temperature"});
    const auto flag = run({"--no-timestamp", "--system-params", p(dir / "sys.json"), "shotnoise", "--nbar", "1e-2",
                           "--as-temperature"});
    REQUIRE(flag.code == 0);
    const double t_base = base.report()["rows"][0]["t_k"].get<double>();
    const double t_flag = flag.report()["rows"][0]["t_k"].get<double>();
    CHECK(rel(t_flag / t_base, 5e9 / 7.458e9) < 1e-12);

    ::setenv(linetherm::cli::kSystemParamsEnv, p(dir / "sys.json").c_str(), 1);
    const auto env = run({"--no-timestamp", "shotnoise", "--nbar", "1e-2", "--as-temperature"});
    ::unsetenv(linetherm::cli::kSystemParamsEnv);
    REQUIRE(env.code == 0);
    CHECK(env.report()["rows"][0]["t_k"].get<double>() == t_flag);
}

TEST_CASE("unknown schema major versions are rejected", "[cli]") {
    const auto dir = scratch("schema");
    linetherm::io::write_text(dir / "d.csv", "# schema_version=2.0\nt_s,signal\n0,1\n1e-6,0.5\n");
    const auto r = run({"decay", p(dir / "d.csv")});
    CHECK(r.code == 2);
    CHECK(r.error()["error"]["code"] == "Schema");
}
