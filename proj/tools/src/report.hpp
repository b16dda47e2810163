#pragma once

#include "linetherm/fit_result.hpp"
#include "linetherm/io.hpp"
#include "linetherm/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace linetherm::cli {

using nlohmann::ordered_json;

/// Provenance attached to every report.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::map<std::string, std::vector<std::string>> overrides;
    std::optional<std::uint64_t> seed;
    std::string tool_version;
    std::optional<std::string> timestamp;  // ISO 8601 UTC, absent with --no-timestamp

    ordered_json to_json() const;
};

/// State shared by every subcommand of one invocation.
struct Context {
    std::vector<std::string> args;
    std::ostream* out = nullptr;
    bool no_timestamp = false;
    std::string output_path;        // report destination; stdout when empty
    std::string system_params_path; // --system-params, else the environment variable
    std::string format = "json";    // json | csv for tabular reports

    /// Manifest for the subcommand that is being executed.
    RunManifest manifest(const CLI::App& command, std::vector<std::string> inputs,
                         std::optional<std::uint64_t> seed = std::nullopt) const;

    /// System parameters from --system-params, the environment variable, or
    /// the built-in device defaults, in that order.
    SystemParams system_params() const;

    /// Writes a JSON report (manifest + body) to the output destination.
    void emit(const RunManifest& manifest, ordered_json body) const;
    /// Writes a CSV table to the output destination with the manifest
    /// embedded as a `# manifest=` comment line.
    void emit_table(const RunManifest& manifest, const io::CsvTable& table) const;
};

/// {names, params, sigmas, covariance, residual_norm, converged, ...}
ordered_json fit_result_json(const FitResult& fit);

/// Writes a plot-ready CSV (dense model grid) to `path`.
void write_curve(const std::filesystem::path& path, const io::CsvTable& table);

}  // namespace linetherm::cli
