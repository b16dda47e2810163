#pragma once

#include "linetherm/decoherence.hpp"
#include "linetherm/resonator.hpp"
#include "linetherm/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

/// File formats shared by the CLI and the generators.
///
/// CSV files carry a header row with SI unit suffixes, optionally preceded
/// by a `# schema_version=MAJOR.MINOR` comment. Metadata lives in a JSON
/// sidecar next to the CSV (same stem, `.json` extension) that also
/// records `schema_version`. Readers reject unknown major versions.
namespace linetherm::io {

inline constexpr int kSchemaMajor = 1;
inline constexpr int kSchemaMinor = 0;

/// "MAJOR.MINOR" of the formats written by this library.
std::string schema_version();

/// Throws Error(Schema) unless `version` is "MAJOR[.MINOR]" with a known major.
void check_schema_version(std::string_view version);

/// Shortest decimal representation that parses back to the same double.
std::string format_number(double value);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Index of a column; throws Error(Schema) if absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const noexcept;
};

/// Parses a numeric CSV table. Blank lines and `#` comments are skipped;
/// a `# schema_version=` comment is validated.
CsvTable parse_csv(std::string_view text);
/// Renders a table with a leading schema comment.
std::string render_csv(const CsvTable& table);

/// Path of the JSON sidecar that belongs to a CSV file.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// Decay traces: t_s,signal[,sigma]
decoherence::DecayTrace decay_from_csv(std::string_view text, decoherence::DecayKind kind);
std::string decay_to_csv(const decoherence::DecayTrace& trace);

// Heat-pulse series: t_cool_s,gamma2_star_per_s,delta_f_hz; sidecar {t_heat_s}
HeatPulseSeries heatpulse_from_text(std::string_view csv, std::optional<std::string_view> sidecar);
std::string heatpulse_to_csv(const HeatPulseSeries& series);
std::string heatpulse_sidecar(const HeatPulseSeries& series);

// Fin experiments: p_heat_w,t_h_k,t_o_k,t_d_k; sidecar {l_c_m, d_hc_m, w_m}
FinExperiment fin_from_text(std::string_view csv, std::string_view sidecar);
std::string fin_to_csv(const FinExperiment& exp);
std::string fin_sidecar(const FinExperiment& exp);

// IQ clouds: i,q; sidecar {f_q_hz}
IQCloud iq_from_text(std::string_view csv, std::string_view sidecar);
std::string iq_to_csv(const IQCloud& cloud);
std::string iq_sidecar(const IQCloud& cloud);

// Phase sweeps: f_hz,phase_g_rad,phase_e_rad; sidecar {n_bar_readout}
resonator::PhaseSweep phase_from_text(std::string_view csv, std::optional<std::string_view> sidecar);
std::string phase_to_csv(const resonator::PhaseSweep& sweep);
std::string phase_sidecar(const resonator::PhaseSweep& sweep);

// System parameters: {f_r_hz, kappa_over_2pi_hz, chi_over_2pi_hz, kappa_g_over_2pi_hz?, kappa_e_over_2pi_hz?}
SystemParams system_params_from_json(std::string_view text);
std::string system_params_to_json(const SystemParams& sys);

// File-level helpers; sidecars are read from / written to sidecar_path().
decoherence::DecayTrace read_decay(const std::filesystem::path& path, decoherence::DecayKind kind);
void write_decay(const std::filesystem::path& path, const decoherence::DecayTrace& trace);
HeatPulseSeries read_heatpulse(const std::filesystem::path& path);
void write_heatpulse(const std::filesystem::path& path, const HeatPulseSeries& series);
FinExperiment read_fin(const std::filesystem::path& path);
void write_fin(const std::filesystem::path& path, const FinExperiment& exp);
IQCloud read_iq(const std::filesystem::path& path);
void write_iq(const std::filesystem::path& path, const IQCloud& cloud);
resonator::PhaseSweep read_phase(const std::filesystem::path& path);
void write_phase(const std::filesystem::path& path, const resonator::PhaseSweep& sweep);
SystemParams read_system_params(const std::filesystem::path& path);

}  // namespace linetherm::io
