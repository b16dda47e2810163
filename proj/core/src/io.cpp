#include "linetherm/io.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace linetherm::io {

using nlohmann::json;

std::string schema_version() { return std::to_string(kSchemaMajor) + "." + std::to_string(kSchemaMinor); }

void check_schema_version(std::string_view version) {
    int major = 0;
    const auto [ptr, ec] = std::from_chars(version.data(), version.data() + version.size(), major);
    const bool tail_ok = ptr == version.data() + version.size() || *ptr == '.';
    if (ec != std::errc() || !tail_ok) {
        throw Error(Errc::Schema, "malformed schema_version '" + std::string(version) + "'");
    }
    if (major != kSchemaMajor) {
        throw Error(Errc::Schema, "unsupported schema major version " + std::to_string(major) + " (supported: " +
                                      std::to_string(kSchemaMajor) + ")");
    }
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw Error(Errc::Io, "number formatting failed");
    return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_number(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = field.data() + field.size();
    if (!field.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || field.empty()) {
        throw Error(Errc::Schema, "line " + std::to_string(line_no) + ": cannot parse number '" + std::string(field) + "'");
    }
    return v;
}

json parse_json(std::string_view text, std::string_view what) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::Schema, std::string(what) + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::Schema, std::string(what) + ": expected a JSON object");
    if (doc.contains("schema_version")) {
        const auto& v = doc["schema_version"];
        if (!v.is_string()) throw Error(Errc::Schema, std::string(what) + ": schema_version must be a string");
        check_schema_version(v.get<std::string>());
    }
    return doc;
}

double require_number(const json& doc, const char* key, std::string_view what) {
    if (!doc.contains(key)) throw Error(Errc::Schema, std::string(what) + ": missing field '" + key + "'");
    if (!doc[key].is_number()) throw Error(Errc::Schema, std::string(what) + ": field '" + key + "' must be a number");
    return doc[key].get<double>();
}

std::optional<double> optional_number(const json& doc, const char* key, std::string_view what) {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    return require_number(doc, key, what);
}

std::string dump(json doc) {
    doc["schema_version"] = schema_version();
    return doc.dump(2) + "\n";
}

void require_columns(const CsvTable& t, std::initializer_list<std::string_view> names, std::string_view what) {
    for (const auto n : names) {
        if (!t.has_column(n)) throw Error(Errc::Schema, std::string(what) + ": missing column '" + std::string(n) + "'");
    }
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error(Errc::Schema, "missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

bool CsvTable::has_column(std::string_view name) const noexcept {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string_view body = trim(line.substr(1));
            constexpr std::string_view key = "schema_version=";
            if (body.substr(0, key.size()) == key) check_schema_version(trim(body.substr(key.size())));
            continue;
        }
        const auto fields = split(line);
        if (!have_header) {
            for (const auto f : fields) table.columns.emplace_back(f);
            have_header = true;
            continue;
        }
        if (fields.size() != table.columns.size()) {
            throw Error(Errc::Schema, "line " + std::to_string(line_no) + ": expected " +
                                          std::to_string(table.columns.size()) + " fields, got " +
                                          std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto f : fields) row.push_back(parse_number(f, line_no));
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw Error(Errc::Schema, "CSV has no header row");
    return table;
}

std::string render_csv(const CsvTable& table) {
    std::string out = "# schema_version=" + schema_version() + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    auto p = csv;
    p.replace_extension(".json");
    return p;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(Errc::Io, "write to '" + path.string() + "' failed");
}

// ---- decay ------------------------------------------------------------------

decoherence::DecayTrace decay_from_csv(std::string_view text, decoherence::DecayKind kind) {
    const CsvTable t = parse_csv(text);
    require_columns(t, {"t_s", "signal"}, "decay CSV");
    const std::size_t it = t.column("t_s");
    const std::size_t is = t.column("signal");
    const bool has_sigma = t.has_column("sigma");
    decoherence::DecayTrace trace;
    trace.kind = kind;
    for (const auto& row : t.rows) {
        trace.times.push_back(row[it]);
        trace.signal.push_back(row[is]);
        if (has_sigma) trace.sigma.push_back(row[t.column("sigma")]);
    }
    trace.validate();
    return trace;
}

std::string decay_to_csv(const decoherence::DecayTrace& trace) {
    CsvTable t;
    t.columns = {"t_s", "signal"};
    const bool has_sigma = !trace.sigma.empty();
    if (has_sigma) t.columns.emplace_back("sigma");
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        std::vector<double> row{trace.times[i], trace.signal[i]};
        if (has_sigma) row.push_back(trace.sigma[i]);
        t.rows.push_back(std::move(row));
    }
    return render_csv(t);
}

// ---- heat pulse ---------------------------------------------------------------

HeatPulseSeries heatpulse_from_text(std::string_view csv, std::optional<std::string_view> sidecar) {
    const CsvTable t = parse_csv(csv);
    require_columns(t, {"t_cool_s", "gamma2_star_per_s", "delta_f_hz"}, "heat-pulse CSV");
    const std::size_t it = t.column("t_cool_s");
    const std::size_t ig = t.column("gamma2_star_per_s");
    const std::size_t iff = t.column("delta_f_hz");
    HeatPulseSeries series;
    for (const auto& row : t.rows) series.samples.push_back({row[it], row[ig], row[iff]});
    if (sidecar) {
        const json doc = parse_json(*sidecar, "heat-pulse sidecar");
        series.t_heat = optional_number(doc, "t_heat_s", "heat-pulse sidecar").value_or(0.0);
    }
    series.validate();
    return series;
}

std::string heatpulse_to_csv(const HeatPulseSeries& series) {
    CsvTable t;
    t.columns = {"t_cool_s", "gamma2_star_per_s", "delta_f_hz"};
    for (const auto& s : series.samples) t.rows.push_back({s.t_cool, s.gamma2_star, s.delta_f});
    return render_csv(t);
}

std::string heatpulse_sidecar(const HeatPulseSeries& series) { return dump({{"t_heat_s", series.t_heat}}); }

// ---- fin ----------------------------------------------------------------------

FinExperiment fin_from_text(std::string_view csv, std::string_view sidecar) {
    const CsvTable t = parse_csv(csv);
    require_columns(t, {"p_heat_w", "t_h_k", "t_o_k", "t_d_k"}, "fin CSV");
    const json doc = parse_json(sidecar, "fin sidecar");
    FinExperiment exp;
    exp.l_c = require_number(doc, "l_c_m", "fin sidecar");
    exp.d_hc = require_number(doc, "d_hc_m", "fin sidecar");
    exp.w = optional_number(doc, "w_m", "fin sidecar").value_or(0.0);
    const std::size_t ip = t.column("p_heat_w");
    const std::size_t ih = t.column("t_h_k");
    const std::size_t io = t.column("t_o_k");
    const std::size_t id = t.column("t_d_k");
    for (const auto& row : t.rows) exp.records.push_back({row[ip], row[ih], row[io], row[id]});
    return exp;
}

std::string fin_to_csv(const FinExperiment& exp) {
    CsvTable t;
    t.columns = {"p_heat_w", "t_h_k", "t_o_k", "t_d_k"};
    for (const auto& r : exp.records) t.rows.push_back({r.p_heat, r.t_h, r.t_o, r.t_d});
    return render_csv(t);
}

std::string fin_sidecar(const FinExperiment& exp) {
    return dump({{"l_c_m", exp.l_c}, {"d_hc_m", exp.d_hc}, {"w_m", exp.w}});
}

// ---- IQ -------------------------------------------------------------------------

IQCloud iq_from_text(std::string_view csv, std::string_view sidecar) {
    const CsvTable t = parse_csv(csv);
    require_columns(t, {"i", "q"}, "IQ CSV");
    const json doc = parse_json(sidecar, "IQ sidecar");
    IQCloud cloud;
    cloud.f_q = require_number(doc, "f_q_hz", "IQ sidecar");
    const std::size_t ii = t.column("i");
    const std::size_t iq = t.column("q");
    cloud.points.reserve(t.rows.size());
    for (const auto& row : t.rows) cloud.points.push_back({row[ii], row[iq]});
    cloud.validate();
    return cloud;
}

std::string iq_to_csv(const IQCloud& cloud) {
    CsvTable t;
    t.columns = {"i", "q"};
    t.rows.reserve(cloud.points.size());
    for (const auto& p : cloud.points) t.rows.push_back({p[0], p[1]});
    return render_csv(t);
}

std::string iq_sidecar(const IQCloud& cloud) { return dump({{"f_q_hz", cloud.f_q}}); }

// ---- phase ------------------------------------------------------------------------

resonator::PhaseSweep phase_from_text(std::string_view csv, std::optional<std::string_view> sidecar) {
    const CsvTable t = parse_csv(csv);
    require_columns(t, {"f_hz", "phase_g_rad", "phase_e_rad"}, "phase CSV");
    resonator::PhaseSweep sweep;
    const std::size_t iff = t.column("f_hz");
    const std::size_t ig = t.column("phase_g_rad");
    const std::size_t ie = t.column("phase_e_rad");
    for (const auto& row : t.rows) {
        sweep.frequencies.push_back(row[iff]);
        sweep.phase_g.push_back(row[ig]);
        sweep.phase_e.push_back(row[ie]);
    }
    if (sidecar) {
        const json doc = parse_json(*sidecar, "phase sidecar");
        sweep.n_bar_readout = optional_number(doc, "n_bar_readout", "phase sidecar").value_or(0.0);
    }
    sweep.validate();
    return sweep;
}

std::string phase_to_csv(const resonator::PhaseSweep& sweep) {
    CsvTable t;
    t.columns = {"f_hz", "phase_g_rad", "phase_e_rad"};
    for (std::size_t i = 0; i < sweep.frequencies.size(); ++i) {
        t.rows.push_back({sweep.frequencies[i], sweep.phase_g[i], sweep.phase_e[i]});
    }
    return render_csv(t);
}

std::string phase_sidecar(const resonator::PhaseSweep& sweep) {
    return dump({{"n_bar_readout", sweep.n_bar_readout}});
}

// ---- system parameters ----------------------------------------------------------

SystemParams system_params_from_json(std::string_view text) {
    constexpr std::string_view what = "system parameters";
    const json doc = parse_json(text, what);
    SystemParams sys;
    sys.f_r = require_number(doc, "f_r_hz", what);
    sys.kappa = angular_from_cyclic(require_number(doc, "kappa_over_2pi_hz", what));
    sys.chi = angular_from_cyclic(require_number(doc, "chi_over_2pi_hz", what));
    if (const auto kg = optional_number(doc, "kappa_g_over_2pi_hz", what)) sys.kappa_g = angular_from_cyclic(*kg);
    if (const auto ke = optional_number(doc, "kappa_e_over_2pi_hz", what)) sys.kappa_e = angular_from_cyclic(*ke);
    if (sys.kappa_g.has_value() != sys.kappa_e.has_value()) {
        throw Error(Errc::Schema, "system parameters: give both or neither state-resolved linewidth");
    }
    sys.validate();
    return sys;
}

std::string system_params_to_json(const SystemParams& sys) {
    json doc = {
        {"f_r_hz", sys.f_r},
        {"kappa_over_2pi_hz", cyclic_from_angular(sys.kappa)},
        {"chi_over_2pi_hz", cyclic_from_angular(sys.chi)},
    };
    if (sys.kappa_g) doc["kappa_g_over_2pi_hz"] = cyclic_from_angular(*sys.kappa_g);
    if (sys.kappa_e) doc["kappa_e_over_2pi_hz"] = cyclic_from_angular(*sys.kappa_e);
    return dump(doc);
}

// ---- files ----------------------------------------------------------------------------

namespace {

std::optional<std::string> read_optional(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_text(path);
}

std::optional<std::string_view> view(const std::optional<std::string>& s) {
    if (!s) return std::nullopt;
    return std::string_view(*s);
}

}  // namespace

decoherence::DecayTrace read_decay(const std::filesystem::path& path, decoherence::DecayKind kind) {
    return decay_from_csv(read_text(path), kind);
}

void write_decay(const std::filesystem::path& path, const decoherence::DecayTrace& trace) {
    write_text(path, decay_to_csv(trace));
}

HeatPulseSeries read_heatpulse(const std::filesystem::path& path) {
    const auto sidecar = read_optional(sidecar_path(path));
    return heatpulse_from_text(read_text(path), view(sidecar));
}

void write_heatpulse(const std::filesystem::path& path, const HeatPulseSeries& series) {
    write_text(path, heatpulse_to_csv(series));
    write_text(sidecar_path(path), heatpulse_sidecar(series));
}

FinExperiment read_fin(const std::filesystem::path& path) {
    return fin_from_text(read_text(path), read_text(sidecar_path(path)));
}

void write_fin(const std::filesystem::path& path, const FinExperiment& exp) {
    write_text(path, fin_to_csv(exp));
    write_text(sidecar_path(path), fin_sidecar(exp));
}

IQCloud read_iq(const std::filesystem::path& path) {
    return iq_from_text(read_text(path), read_text(sidecar_path(path)));
}

void write_iq(const std::filesystem::path& path, const IQCloud& cloud) {
    write_text(path, iq_to_csv(cloud));
    write_text(sidecar_path(path), iq_sidecar(cloud));
}

resonator::PhaseSweep read_phase(const std::filesystem::path& path) {
    const auto sidecar = read_optional(sidecar_path(path));
    return phase_from_text(read_text(path), view(sidecar));
}

void write_phase(const std::filesystem::path& path, const resonator::PhaseSweep& sweep) {
    write_text(path, phase_to_csv(sweep));
    write_text(sidecar_path(path), phase_sidecar(sweep));
}

SystemParams read_system_params(const std::filesystem::path& path) {
    return system_params_from_json(read_text(path));
}

}  // namespace linetherm::io
