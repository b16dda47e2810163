#include "report.hpp"

#include "linetherm/cli.hpp"
#include "linetherm/error.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace linetherm::cli {

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// JSON has no representation for inf/nan; they are written as strings so
/// that a reader never mistakes them for a missing value.
ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

void collect_overrides(const CLI::App& app, std::map<std::string, std::vector<std::string>>& out) {
    for (const CLI::Option* opt : app.get_options()) {
        if (opt->count() == 0 || !opt->nonpositional()) continue;
        const std::string name = opt->get_name();
        if (name == "--help" || name == "-h" || name == "--output" || name == "--no-timestamp") continue;
        out[name] = opt->results();
        if (out[name].empty()) out[name].push_back("true");
    }
}

void write_destination(const std::string& path, std::ostream* out, const std::string& text) {
    if (path.empty()) {
        *out << text;
        out->flush();
    } else {
        io::write_text(path, text);
    }
}

}  // namespace

ordered_json RunManifest::to_json() const {
    ordered_json j;
    j["command"] = command;
    j["inputs"] = inputs;
    ordered_json ov = ordered_json::object();
    for (const auto& [k, v] : overrides) ov[k] = v;
    j["overrides"] = ov;
    j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    j["tool_version"] = tool_version;
    j["schema_version"] = io::schema_version();
    if (timestamp) j["timestamp"] = *timestamp;
    return j;
}

RunManifest Context::manifest(const CLI::App& command, std::vector<std::string> inputs,
                              std::optional<std::uint64_t> seed) const {
    RunManifest m;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) m.command += ' ';
        m.command += i == 0 ? std::string("linetherm") : args[i];
    }
    m.inputs = std::move(inputs);
    // Global options live on the root app; the subcommand chain carries the rest.
    const CLI::App* node = &command;
    while (node != nullptr) {
        collect_overrides(*node, m.overrides);
        node = node->get_parent();
    }
    m.seed = seed;
    m.tool_version = tool_version();
    if (!no_timestamp) m.timestamp = utc_timestamp();
    return m;
}

SystemParams Context::system_params() const {
    std::string path = system_params_path;
    if (path.empty()) {
        if (const char* env = std::getenv(kSystemParamsEnv); env != nullptr && *env != '\0') path = env;
    }
    if (path.empty()) return SystemParams::device_default();
    return io::read_system_params(path);
}

void Context::emit(const RunManifest& manifest, ordered_json body) const {
    ordered_json doc;
    doc["manifest"] = manifest.to_json();
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    write_destination(output_path, out, doc.dump(2) + "\n");
}

void Context::emit_table(const RunManifest& manifest, const io::CsvTable& table) const {
    std::string text = io::render_csv(table);
    // render_csv starts with the schema comment; the manifest follows it.
    const auto first_line = text.find('\n');
    text.insert(first_line + 1, "# manifest=" + manifest.to_json().dump() + "\n");
    write_destination(output_path, out, text);
}

ordered_json fit_result_json(const FitResult& fit) {
    ordered_json j;
    j["names"] = fit.names;
    ordered_json params = ordered_json::object();
    ordered_json sigmas = ordered_json::object();
    for (std::size_t i = 0; i < fit.names.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        params[fit.names[i]] = number(fit.values[k]);
        sigmas[fit.names[i]] = number(fit.sigmas[k]);
    }
    j["params"] = params;
    j["sigmas"] = sigmas;
    ordered_json cov = ordered_json::array();
    for (Eigen::Index r = 0; r < fit.covariance.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < fit.covariance.cols(); ++c) row.push_back(number(fit.covariance(r, c)));
        cov.push_back(row);
    }
    j["covariance"] = cov;
    j["residual_norm"] = number(fit.residual_norm);
    j["converged"] = fit.converged;
    j["rank_deficient"] = fit.rank_deficient;
    j["n_iterations"] = fit.n_iterations;
    j["status"] = fit.status;
    if (!fit.derived_names.empty()) {
        ordered_json derived = ordered_json::object();
        for (std::size_t i = 0; i < fit.derived_names.size(); ++i) {
            derived[fit.derived_names[i]] = {{"value", number(fit.derived_values[i])},
                                             {"sigma", number(fit.derived_sigmas[i])}};
        }
        j["derived"] = derived;
    }
    j["warnings"] = fit.warnings;
    return j;
}

void write_curve(const std::filesystem::path& path, const io::CsvTable& table) {
    io::write_text(path, io::render_csv(table));
}

}  // namespace linetherm::cli
