#include "commands.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/decoherence.hpp"
#include "linetherm/error.hpp"
#include "linetherm/fin.hpp"
#include "linetherm/heatpulse.hpp"
#include "linetherm/iqtemp.hpp"
#include "linetherm/resonator.hpp"
#include "linetherm/shotnoise.hpp"
#include "linetherm/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

namespace linetherm::cli {

std::optional<double> either(const std::optional<double>& si, const std::optional<double>& scaled, double scale,
                             const std::string& si_flag, const std::string& scaled_flag) {
    if (si && scaled) throw Error(Errc::InvalidArgument, si_flag + " and " + scaled_flag + " are mutually exclusive");
    if (si) return *si;
    if (scaled) return *scaled * scale;
    return std::nullopt;
}

namespace {

constexpr std::size_t kCurvePoints = 501;

// ---- shotnoise ---------------------------------------------------------------

struct ShotnoiseArgs {
    std::vector<double> gamma;
    std::vector<double> gamma_khz;
    std::vector<double> nbar;
    std::vector<double> temperature_k;
    std::vector<double> temperature_mk;
    bool as_temperature = false;
};

void run_shotnoise(const CLI::App& cmd, const Context& ctx, const ShotnoiseArgs& a) {
    const SystemParams sys = ctx.system_params();
    std::vector<double> nbar;
    for (const double g : a.gamma) nbar.push_back(shotnoise::photons_from_dephasing(g, sys));
    for (const double g : a.gamma_khz) nbar.push_back(shotnoise::photons_from_dephasing(g * 1e3, sys));
    for (const double n : a.nbar) {
        if (!(n >= 0.0) || !std::isfinite(n)) throw Error(Errc::InvalidArgument, "--nbar values must be finite and >= 0");
        nbar.push_back(n);
    }
    for (const double t : a.temperature_k) nbar.push_back(shotnoise::bose_einstein(t, sys.f_r));
    for (const double t : a.temperature_mk) nbar.push_back(shotnoise::bose_einstein(t * 1e-3, sys.f_r));
    if (nbar.empty()) {
        throw Error(Errc::InvalidArgument, "give at least one of --gamma, --gamma-khz, --nbar, --temperature-k, --temperature-mk");
    }

    io::CsvTable table;
    table.columns = a.as_temperature ? std::vector<std::string>{"n_bar", "t_k"}
                                     : std::vector<std::string>{"gamma_per_s", "delta_f_hz", "n_bar", "t_k"};
    for (const double n : nbar) {
        // n = 0 is the zero-temperature limit, outside the inversion's domain.
        const double t = n == 0.0 ? 0.0 : shotnoise::temperature_from_photons(n, sys.f_r);
        if (a.as_temperature) {
            table.rows.push_back({n, t});
        } else {
            const auto p = shotnoise::dephasing_full(n, sys);
            table.rows.push_back({p.gamma_n, p.delta_f_stark, n, t});
        }
    }

    const RunManifest manifest = ctx.manifest(cmd, ctx.system_params_path.empty() ? std::vector<std::string>{}
                                                                                  : std::vector<std::string>{ctx.system_params_path});
    if (ctx.format == "csv") {
        ctx.emit_table(manifest, table);
        return;
    }
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows) {
        ordered_json row;
        for (std::size_t c = 0; c < table.columns.size(); ++c) row[table.columns[c]] = r[c];
        rows.push_back(row);
    }
    ordered_json body;
    body["system_params"] = ordered_json::parse(io::system_params_to_json(sys));
    body["rows"] = rows;
    ordered_json warnings = ordered_json::array();
    if (const auto w = shotnoise::linear_regime_warning(sys)) warnings.push_back(*w);
    body["warnings"] = warnings;
    ctx.emit(manifest, body);
}

// ---- decay -------------------------------------------------------------------

struct DecayArgs {
    std::vector<std::string> files;
    std::string kind = "relaxation";
    std::optional<double> gamma1;
    std::optional<double> gamma1_khz;
    std::string emit_curve;
};

void run_decay(const CLI::App& cmd, const Context& ctx, const DecayArgs& a) {
    const auto kind = decoherence::decay_kind_from_string(a.kind);
    const auto gamma1 = either(a.gamma1, a.gamma1_khz, 1e3, "--gamma1", "--gamma1-khz");
    const std::string rate_name(decoherence::rate_parameter(kind));

    ordered_json fits = ordered_json::array();
    std::vector<double> rates;
    io::CsvTable curve;
    curve.columns = {"dataset", "t_s", "model"};
    for (std::size_t k = 0; k < a.files.size(); ++k) {
        const auto trace = io::read_decay(a.files[k], kind);
        const FitResult fit = decoherence::fit_trace(trace);
        ordered_json entry;
        entry["file"] = a.files[k];
        entry["fit"] = fit_result_json(fit);
        const double rate = fit.value(rate_name);
        rates.push_back(rate);
        if (gamma1 && kind != decoherence::DecayKind::Relaxation) {
            entry["gamma_phi_per_s"] = decoherence::pure_dephasing(rate, *gamma1);
        }
        fits.push_back(entry);

        if (!a.emit_curve.empty()) {
            const auto t = synth::linspace(trace.times.front(), trace.times.back(), kCurvePoints);
            for (const double ti : t) {
                const double y = kind == decoherence::DecayKind::Ramsey
                                     ? decoherence::ramsey_model(ti, fit.value("A"), rate, fit.value("detuning"),
                                                                 fit.value("phase"), fit.value("B"))
                                     : decoherence::relaxation_model(ti, fit.value("A"), rate, fit.value("B"));
                curve.rows.push_back({static_cast<double>(k), ti, y});
            }
        }
    }

    ordered_json body;
    body["kind"] = std::string(decoherence::to_string(kind));
    body["rate_parameter"] = rate_name;
    body["fits"] = fits;
    if (rates.size() > 1) {
        const auto s = decoherence::summarize_rates(rates);
        body["summary"] = {{"mean_per_s", s.mean}, {"sigma_per_s", s.sigma}, {"n_samples", s.n_samples}};
    }
    if (!a.emit_curve.empty()) write_curve(a.emit_curve, curve);
    ctx.emit(ctx.manifest(cmd, a.files), body);
}

// ---- heatpulse ---------------------------------------------------------------

struct HeatpulseArgs {
    std::vector<std::string> files;
    std::optional<double> t0_k;
    std::optional<double> t0_mk;
    std::optional<double> tail_start_s;
    std::optional<double> tail_start_ms;
    std::optional<double> baseline;
    std::optional<double> sigma_gamma;
    std::optional<double> sigma_f_hz;
    std::optional<double> sigma_f_khz;
    std::optional<double> tau_initial_ms;
    bool fit_t0 = false;
    bool no_offset_calibration = false;
    std::string emit_curve;
};

void run_heatpulse(const CLI::App& cmd, const Context& ctx, const HeatpulseArgs& a) {
    const SystemParams sys = ctx.system_params();
    const auto t0 = either(a.t0_k, a.t0_mk, 1e-3, "--t0-k", "--t0-mk");
    if (!t0) throw Error(Errc::InvalidArgument, "the base temperature is required (--t0-mk or --t0-k)");
    const double tail_start = either(a.tail_start_s, a.tail_start_ms, 1e-3, "--tail-start-s", "--tail-start-ms")
                                  .value_or(5e-3);

    std::vector<HeatPulseSeries> datasets;
    for (const auto& f : a.files) datasets.push_back(io::read_heatpulse(f));

    heatpulse::CoolingOptions opts;
    opts.fit_t0 = a.fit_t0;
    opts.sigma_gamma = a.sigma_gamma;
    opts.sigma_f = either(a.sigma_f_hz, a.sigma_f_khz, 1e3, "--sigma-f-hz", "--sigma-f-khz");
    if (a.tau_initial_ms) opts.tau_initial = *a.tau_initial_ms * 1e-3;

    ordered_json body;
    FitResult fit;
    if (a.no_offset_calibration) {
        fit = heatpulse::fit_cooling(datasets, sys, *t0, opts);
    } else {
        const auto analysis = heatpulse::analyze_cooling(datasets, sys, *t0, tail_start, a.baseline, opts);
        body["calibration"] = {{"gamma_offset_per_s", analysis.calibration.offset},
                               {"baseline_per_s", analysis.baseline},
                               {"tail_start_s", tail_start},
                               {"n_tail", analysis.calibration.n_tail},
                               {"low_confidence", analysis.calibration.low_confidence}};
        opts.gamma_offset = analysis.calibration.offset;
        fit = analysis.fit;
    }
    body["fit"] = fit_result_json(fit);
    body["tau_cool_ms"] = fit.value("tau_cool") * 1e3;

    if (!a.emit_curve.empty()) {
        io::CsvTable curve;
        curve.columns = {"dataset", "t_cool_s", "gamma2_star_per_s", "delta_f_hz"};
        const double t0_fit = a.fit_t0 ? fit.value("T0") : *t0;
        for (std::size_t k = 0; k < datasets.size(); ++k) {
            const std::string dt_name = datasets.size() > 1 ? "delta_T[" + std::to_string(k) + "]" : "delta_T";
            const heatpulse::HeatPulseModelParams m{t0_fit, fit.value(dt_name), fit.value("tau_cool"), 0.0,
                                                    fit.value("f0_offset")};
            double t_max = 0.0;
            for (const auto& s : datasets[k].samples) t_max = std::max(t_max, s.t_cool);
            for (const double t : synth::linspace(0.0, t_max, kCurvePoints)) {
                const auto p = heatpulse::trajectory(m, sys, t);
                curve.rows.push_back({static_cast<double>(k), t, p.gamma_n + opts.gamma_offset, p.delta_f + m.f0_offset});
            }
        }
        write_curve(a.emit_curve, curve);
    }
    ctx.emit(ctx.manifest(cmd, a.files), body);
}

// ---- fin ---------------------------------------------------------------------

struct FinExtractArgs {
    std::string file;
    std::optional<double> threshold_w;
    std::optional<double> threshold_uw;
    std::string emit_curve;
};

void run_fin_extract(const CLI::App& cmd, const Context& ctx, const FinExtractArgs& a) {
    const auto threshold = either(a.threshold_w, a.threshold_uw, 1e-6, "--threshold-w", "--threshold-uw");
    if (!threshold) throw Error(Errc::InvalidArgument, "the linear-regime threshold is required (--threshold-uw or --threshold-w)");
    const FinExperiment exp = io::read_fin(a.file);
    ordered_json warnings = ordered_json::array();
    if (!exp.validate()) warnings.push_back("some records break the ordering T_h >= T_o >= T_d");
    const auto x = fin::extract_resistances(exp, *threshold);

    ordered_json body;
    body["u"] = x.u;
    body["g_k_per_w"] = x.g;
    body["r_s_k_per_w"] = x.r_s();
    body["r_t_k_per_w"] = x.r_t();
    body["slope_h_k_per_w"] = x.slope_h;
    body["slope_o_k_per_w"] = x.slope_o;
    body["threshold_w"] = x.threshold;
    body["warnings"] = warnings;

    if (!a.emit_curve.empty()) {
        io::CsvTable curve;
        curve.columns = {"p_heat_w", "dt_h_k", "dt_o_k"};
        double p_max = 0.0;
        for (const auto& r : exp.records) p_max = std::max(p_max, r.p_heat);
        for (const double p : synth::linspace(0.0, p_max, kCurvePoints)) {
            curve.rows.push_back({p, p * x.slope_h, p * x.slope_o});
        }
        write_curve(a.emit_curve, curve);
    }
    ctx.emit(ctx.manifest(cmd, {a.file}), body);
}

struct FinSolveArgs {
    double r_s = 0.0;
    double r_t = 0.0;
    double l_c = 0.045;
    double d_hc = 0.025;
    double t_d = 0.1;
    std::optional<double> p_w;
    std::optional<double> p_uw;
    std::size_t n = 1000;
};

void run_fin_solve(const CLI::App& cmd, const Context& ctx, const FinSolveArgs& a) {
    const auto p = either(a.p_w, a.p_uw, 1e-6, "--p-w", "--p-uw");
    if (!p) throw Error(Errc::InvalidArgument, "the heater power is required (--p-uw or --p-w)");
    const fin::FinParams params{a.r_s, a.r_t, a.l_c, a.d_hc, a.t_d, *p};
    const auto sol = fin::solve_discrete(params, a.n);
    io::CsvTable table;
    table.columns = {"x_m", "t_discrete_k", "t_analytic_k"};
    for (std::size_t i = 0; i < sol.positions.size(); ++i) {
        table.rows.push_back({sol.positions[i], sol.profile[i], fin::analytic_profile(params, sol.positions[i])});
    }
    const RunManifest manifest = ctx.manifest(cmd, {});
    if (ctx.format == "csv") {
        ctx.emit_table(manifest, table);
        return;
    }
    const auto s = fin::predicted_diffs(params);
    ordered_json body;
    body["t_h_k"] = sol.t_h;
    body["t_o_k"] = sol.t_o;
    body["analytic_t_h_k"] = a.t_d + *p * s.slope_h;
    body["analytic_t_o_k"] = a.t_d + *p * s.slope_o;
    body["u"] = params.shape();
    body["g_k_per_w"] = params.magnitude();
    ctx.emit(manifest, body);
}

// ---- iqtemp ------------------------------------------------------------------

struct IqArgs {
    std::vector<std::string> files;
    std::uint64_t seed = 1;
    std::size_t max_iterations = 1000;
    std::vector<double> ground_reference;
};

void run_iqtemp(const CLI::App& cmd, const Context& ctx, const IqArgs& a) {
    std::vector<IQCloud> clouds;
    for (const auto& f : a.files) clouds.push_back(io::read_iq(f));
    iq::MixtureOptions opts;
    opts.max_iterations = a.max_iterations;
    if (!a.ground_reference.empty()) {
        if (a.ground_reference.size() != 2) throw Error(Errc::InvalidArgument, "--ground-reference takes I and Q");
        opts.ground_reference = IQPoint{a.ground_reference[0], a.ground_reference[1]};
    }

    ordered_json per_cloud = ordered_json::array();
    for (std::size_t k = 0; k < clouds.size(); ++k) {
        const auto fit = iq::fit_mixture(clouds[k], a.seed + k, opts);
        ordered_json c;
        c["file"] = a.files[k];
        c["f_q_hz"] = clouds[k].f_q;
        c["p_g"] = fit.model.p_g();
        c["p_e"] = fit.model.p_e();
        c["mean_g"] = {fit.model.means[0].x(), fit.model.means[0].y()};
        c["mean_e"] = {fit.model.means[1].x(), fit.model.means[1].y()};
        c["separation"] = fit.separation;
        c["bic_gain"] = fit.bic_gain;
        c["well_separated"] = fit.well_separated;
        c["iterations"] = fit.iterations;
        try {
            c["t_q_k"] = iq::temperature_from_populations(fit.model.p_e(), fit.model.p_g(), clouds[k].f_q);
        } catch (const Error& e) {
            if (e.code() != Errc::InvertedPopulation) throw;
            c["t_q_k"] = nullptr;
            c["excluded"] = e.what();
        }
        per_cloud.push_back(c);
    }
    const auto sweep = iq::sweep_temperature(clouds, a.seed, opts);
    ordered_json body;
    body["clouds"] = per_cloud;
    body["mean_t_q_k"] = sweep.mean;
    body["sigma_t_q_k"] = sweep.sigma;
    body["n_used"] = sweep.points.size();
    body["n_excluded"] = sweep.excluded.size();
    ctx.emit(ctx.manifest(cmd, a.files, a.seed), body);
}

// ---- resonator ---------------------------------------------------------------

struct ResonatorFitArgs {
    std::string file;
    bool fit_coupling = false;
    std::string emit_curve;
};

void run_resonator_fit(const CLI::App& cmd, const Context& ctx, const ResonatorFitArgs& a) {
    const auto sweep = io::read_phase(a.file);
    resonator::PhaseFitOptions opts;
    opts.fit_coupling = a.fit_coupling;
    const FitResult fit = resonator::fit_phase_pair(sweep, opts);

    ordered_json body;
    body["fit"] = fit_result_json(fit);
    body["chi_over_2pi_hz"] = fit.derived("chi") / two_pi;
    body["kappa_g_over_2pi_hz"] = fit.value("kappa_g") / two_pi;
    body["kappa_e_over_2pi_hz"] = fit.value("kappa_e") / two_pi;
    body["n_bar_readout"] = sweep.n_bar_readout;

    if (!a.emit_curve.empty()) {
        io::CsvTable curve;
        curve.columns = {"f_hz", "phase_g_rad", "phase_e_rad"};
        const double eta_g = a.fit_coupling ? fit.value("eta_g") : 1.0;
        const double eta_e = a.fit_coupling ? fit.value("eta_e") : 1.0;
        for (const double f : synth::linspace(sweep.frequencies.front(), sweep.frequencies.back(), kCurvePoints)) {
            curve.rows.push_back(
                {f,
                 resonator::reflection_phase(f, fit.value("f_g"), fit.value("kappa_g"), eta_g * fit.value("kappa_g"),
                                             fit.value("tau_delay"), fit.value("theta0")),
                 resonator::reflection_phase(f, fit.value("f_e"), fit.value("kappa_e"), eta_e * fit.value("kappa_e"),
                                             fit.value("tau_delay"), fit.value("theta0"))});
        }
        write_curve(a.emit_curve, curve);
    }
    ctx.emit(ctx.manifest(cmd, {a.file}), body);
}

struct ResonatorExtrapolateArgs {
    std::string file;
};

void run_resonator_extrapolate(const CLI::App& cmd, const Context& ctx, const ResonatorExtrapolateArgs& a) {
    const auto table = io::parse_csv(io::read_text(a.file));
    const std::size_t in = table.column("n_bar");
    const std::size_t ic = table.column("chi_over_2pi_hz");
    std::vector<resonator::ChiPoint> points;
    for (const auto& r : table.rows) points.push_back({r[in], two_pi * r[ic]});
    const auto x = resonator::extrapolate_chi(points);
    ordered_json body;
    body["chi0_over_2pi_hz"] = x.chi0 / two_pi;
    body["sigma_over_2pi_hz"] = x.sigma / two_pi;
    body["linear_fallback"] = x.linear_fallback;
    body["fit"] = fit_result_json(x.fit);
    ctx.emit(ctx.manifest(cmd, {a.file}), body);
}

}  // namespace

void add_shotnoise(CLI::App& app, Context& ctx) {
    auto a = std::make_shared<ShotnoiseArgs>();
    auto* cmd = app.add_subcommand("shotnoise", "Convert between dephasing rate, Stark shift, photon number and temperature");
    cmd->add_option("--gamma", a->gamma, "Photon shot-noise dephasing rates (1/s)");
    cmd->add_option("--gamma-khz", a->gamma_khz, "Dephasing rates in kHz (1/ms)");
    cmd->add_option("--nbar", a->nbar, "Mean resonator photon numbers");
    cmd->add_option("--temperature-k", a->temperature_k, "Black-body temperatures (K)");
    cmd->add_option("--temperature-mk", a->temperature_mk, "Black-body temperatures (mK)");
    cmd->add_flag("--as-temperature", a->as_temperature, "Report only photon number and temperature");
    cmd->callback([cmd, &ctx, a] { run_shotnoise(*cmd, ctx, *a); });
}

void add_decay(CLI::App& app, Context& ctx) {
    auto a = std::make_shared<DecayArgs>();
    auto* cmd = app.add_subcommand("decay", "Fit relaxation, Ramsey or echo decay traces (CSV: t_s,signal[,sigma])");
    cmd->add_option("files", a->files, "Decay trace CSV files")->required()->check(CLI::ExistingFile);
    cmd->add_option("--kind", a->kind, "relaxation | ramsey | echo")
        ->check(CLI::IsMember({"relaxation", "ramsey", "echo"}))
        ->capture_default_str();
    cmd->add_option("--gamma1", a->gamma1, "Relaxation rate (1/s) for the pure-dephasing rate of each fit");
    cmd->add_option("--gamma1-khz", a->gamma1_khz, "Relaxation rate in kHz");
    cmd->add_option("--emit-curve", a->emit_curve, "Write the fitted models on a dense grid to this CSV");
    cmd->callback([cmd, &ctx, a] { run_decay(*cmd, ctx, *a); });
}

void add_heatpulse(CLI::App& app, Context& ctx) {
    auto a = std::make_shared<HeatpulseArgs>();
    auto* cmd = app.add_subcommand("heatpulse", "Joint cooling fit of heat-pulse series (CSV: t_cool_s,gamma2_star_per_s,delta_f_hz)");
    cmd->add_option("files", a->files, "Heat-pulse CSV files, one per pulse amplitude")->required()->check(CLI::ExistingFile);
    cmd->add_option("--t0-k", a->t0_k, "Base temperature (K)");
    cmd->add_option("--t0-mk", a->t0_mk, "Base temperature (mK)");
    cmd->add_option("--tail-start-s", a->tail_start_s, "Samples with t_cool at or after this time calibrate the rate offset (s)");
    cmd->add_option("--tail-start-ms", a->tail_start_ms, "Tail start in ms (default 5 ms)");
    cmd->add_option("--baseline-per-s", a->baseline, "Independently measured baseline dephasing rate (1/s)");
    cmd->add_option("--sigma-gamma-per-s", a->sigma_gamma, "Known noise of the dephasing rates (1/s)");
    cmd->add_option("--sigma-f-hz", a->sigma_f_hz, "Known noise of the frequency shifts (Hz)");
    cmd->add_option("--sigma-f-khz", a->sigma_f_khz, "Known noise of the frequency shifts (kHz)");
    cmd->add_option("--tau-initial-ms", a->tau_initial_ms, "Starting value for the cooling time (ms)");
    cmd->add_flag("--fit-t0", a->fit_t0, "Fit the base temperature as a shared parameter");
    cmd->add_flag("--no-offset-calibration", a->no_offset_calibration, "Fit the rates without the tail offset calibration");
    cmd->add_option("--emit-curve", a->emit_curve, "Write the fitted trajectories on a dense grid to this CSV");
    cmd->callback([cmd, &ctx, a] { run_heatpulse(*cmd, ctx, *a); });
}

void add_fin(CLI::App& app, Context& ctx) {
    auto* fin_cmd = app.add_subcommand("fin", "Thermal-fin model of a clamped stripline");
    fin_cmd->require_subcommand(1);

    auto x = std::make_shared<FinExtractArgs>();
    auto* extract = fin_cmd->add_subcommand("extract", "Extract R_s and R_t from a power sweep (CSV: p_heat_w,t_h_k,t_o_k,t_d_k)");
    extract->add_option("file", x->file, "Fin experiment CSV (with JSON sidecar)")->required()->check(CLI::ExistingFile);
    extract->add_option("--threshold-w", x->threshold_w, "Upper end of the linear regime (W)");
    extract->add_option("--threshold-uw", x->threshold_uw, "Upper end of the linear regime (uW)");
    extract->add_option("--emit-curve", x->emit_curve, "Write the fitted temperature rises versus power to this CSV");
    extract->callback([extract, &ctx, x] { run_fin_extract(*extract, ctx, *x); });

    auto s = std::make_shared<FinSolveArgs>();
    auto* solve = fin_cmd->add_subcommand("solve", "Discrete and analytic temperature profile");
    solve->add_option("--r-s", s->r_s, "Total along-strip resistance (K/W)")->required();
    solve->add_option("--r-t", s->r_t, "Total contact resistance (K/W)")->required();
    solve->add_option("--l-c-m", s->l_c, "Clamp length (m)")->capture_default_str();
    solve->add_option("--d-hc-m", s->d_hc, "Heater-side thermometer distance (m)")->capture_default_str();
    solve->add_option("--t-d-k", s->t_d, "Clamp temperature (K)")->capture_default_str();
    solve->add_option("--p-w", s->p_w, "Heater power (W)");
    solve->add_option("--p-uw", s->p_uw, "Heater power (uW)");
    solve->add_option("--sites", s->n, "Number of discrete sites")->capture_default_str();
    solve->callback([solve, &ctx, s] { run_fin_solve(*solve, ctx, *s); });
}

void add_iqtemp(CLI::App& app, Context& ctx) {
    auto a = std::make_shared<IqArgs>();
    auto* cmd = app.add_subcommand("iqtemp", "Qubit temperature from single-shot IQ clouds (CSV: i,q; sidecar f_q_hz)");
    cmd->add_option("files", a->files, "IQ cloud CSV files")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", a->seed, "Seed of the k-means++ initialization (cloud k uses seed + k)")->capture_default_str();
    cmd->add_option("--max-iterations", a->max_iterations, "EM iteration limit")->capture_default_str();
    cmd->add_option("--ground-reference", a->ground_reference, "I Q of the ground pointer state (labels by distance instead of weight)")
        ->expected(2);
    cmd->callback([cmd, &ctx, a] { run_iqtemp(*cmd, ctx, *a); });
}

void add_resonator(CLI::App& app, Context& ctx) {
    auto* res_cmd = app.add_subcommand("resonator", "Dispersive readout parameters");
    res_cmd->require_subcommand(1);

    auto f = std::make_shared<ResonatorFitArgs>();
    auto* fit = res_cmd->add_subcommand("fit", "Fit a reflection phase pair (CSV: f_hz,phase_g_rad,phase_e_rad)");
    fit->add_option("file", f->file, "Phase sweep CSV")->required()->check(CLI::ExistingFile);
    fit->add_flag("--fit-coupling", f->fit_coupling, "Also fit the coupling ratios kappa_c/kappa");
    fit->add_option("--emit-curve", f->emit_curve, "Write the fitted phase curves on a dense grid to this CSV");
    fit->callback([fit, &ctx, f] { run_resonator_fit(*fit, ctx, *f); });

    auto e = std::make_shared<ResonatorExtrapolateArgs>();
    auto* ex = res_cmd->add_subcommand("extrapolate", "Extrapolate chi to zero readout photons (CSV: n_bar,chi_over_2pi_hz)");
    ex->add_option("file", e->file, "Chi trend CSV")->required()->check(CLI::ExistingFile);
    ex->callback([ex, &ctx, e] { run_resonator_extrapolate(*ex, ctx, *e); });
}

}  // namespace linetherm::cli
