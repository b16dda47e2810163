#pragma once

#include "report.hpp"

#include <optional>
#include <string>

namespace CLI {
class App;
}

namespace linetherm::cli {

void add_shotnoise(CLI::App& app, Context& ctx);
void add_decay(CLI::App& app, Context& ctx);
void add_heatpulse(CLI::App& app, Context& ctx);
void add_fin(CLI::App& app, Context& ctx);
void add_iqtemp(CLI::App& app, Context& ctx);
void add_resonator(CLI::App& app, Context& ctx);
void add_synth(CLI::App& app, Context& ctx);

/// Resolves a quantity that may be given in one of two units (e.g. --t0-k
/// or --t0-mk). Returns the value in SI units, or nullopt if neither flag
/// was given; throws if both were.
std::optional<double> either(const std::optional<double>& si, const std::optional<double>& scaled, double scale,
                             const std::string& si_flag, const std::string& scaled_flag);

}  // namespace linetherm::cli
