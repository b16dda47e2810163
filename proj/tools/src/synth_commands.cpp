#include "commands.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"
#include "linetherm/synth.hpp"

#include <CLI11.hpp>

#include <memory>

namespace linetherm::cli {

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::string out;
};

void add_common(CLI::App& cmd, Common& c) {
    cmd.add_option("--seed", c.seed, "Generator seed")->capture_default_str();
    cmd.add_option("--out", c.out, "CSV file to write (a JSON sidecar is written next to it when needed)")->required();
}

void report(const CLI::App& cmd, const Context& ctx, const Common& c, std::vector<std::string> written) {
    ordered_json body;
    body["written"] = written;
    ctx.emit(ctx.manifest(cmd, {}, c.seed), body);
}

std::vector<double> grid(double start, double stop, std::size_t n) {
    if (!(stop > start)) throw Error(Errc::InvalidArgument, "grid stop must exceed start");
    if (n < 2) throw Error(Errc::InvalidArgument, "grid needs at least 2 points");
    return synth::linspace(start, stop, n);
}

// ---- decay -------------------------------------------------------------------

struct DecayArgs {
    Common c;
    std::string kind = "relaxation";
    double rate = 4.77e5;
    double amplitude = 1.0;
    double offset = 0.0;
    double detuning = 0.0;
    double phase = 0.0;
    double t_max_us = 10.0;
    std::size_t n_points = 101;
    double sigma = 0.0;
    double detuning_jitter = 0.0;
};

void run_decay(const CLI::App& cmd, const Context& ctx, const DecayArgs& a) {
    const auto kind = decoherence::decay_kind_from_string(a.kind);
    const synth::DecayParams p{a.amplitude, a.rate, a.offset, a.detuning, a.phase};
    const auto trace = synth::gen_decay(kind, p, grid(0.0, a.t_max_us * 1e-6, a.n_points), {a.sigma, a.detuning_jitter},
                                        a.c.seed);
    io::write_decay(a.c.out, trace);
    report(cmd, ctx, a.c, {a.c.out});
}

// ---- heatpulse ---------------------------------------------------------------

struct HeatpulseArgs {
    Common c;
    double t0_mk = 58.0;
    double delta_t_mk = 114.0;
    double tau_ms = 0.28;
    double gamma_offset = 0.0;
    double f0_offset = 0.0;
    double t_max_ms = 20.0;
    std::size_t n_points = 201;
    double sigma_gamma = 0.0;
    double sigma_f_hz = 0.0;
    double t_heat = 0.0;
};

void run_heatpulse(const CLI::App& cmd, const Context& ctx, const HeatpulseArgs& a) {
    const heatpulse::HeatPulseModelParams m{a.t0_mk * 1e-3, a.delta_t_mk * 1e-3, a.tau_ms * 1e-3, a.gamma_offset,
                                            a.f0_offset};
    const auto series = synth::gen_heatpulse(m, ctx.system_params(), grid(0.0, a.t_max_ms * 1e-3, a.n_points),
                                             {a.sigma_gamma, a.sigma_f_hz}, a.c.seed, a.t_heat);
    io::write_heatpulse(a.c.out, series);
    report(cmd, ctx, a.c, {a.c.out, io::sidecar_path(a.c.out).string()});
}

// ---- fin ---------------------------------------------------------------------

struct FinArgs {
    Common c;
    double u = 1.0;
    double g = 1.6e4;
    double l_c = 0.045;
    double d_hc = 0.025;
    double w = 0.0;
    double t_d = 0.1;
    std::vector<double> powers_uw{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0};
    double noise_relative = 0.0;
    double noise_absolute = 0.0;
};

void run_fin(const CLI::App& cmd, const Context& ctx, const FinArgs& a) {
    std::vector<double> powers;
    for (const double p : a.powers_uw) powers.push_back(p * 1e-6);
    const auto exp = synth::gen_fin(a.u, a.g, {a.l_c, a.d_hc, a.w}, a.t_d, powers,
                                    {a.noise_relative, a.noise_absolute}, a.c.seed);
    io::write_fin(a.c.out, exp);
    report(cmd, ctx, a.c, {a.c.out, io::sidecar_path(a.c.out).string()});
}

// ---- iq ----------------------------------------------------------------------

struct IqArgs {
    Common c;
    double t_mk = 26.4;
    double f_q_hz = 0.5e9;
    double separation = 4.0;  // pointer states at +-2 sigma
    double sigma = 1.0;
    std::size_t n_points = 50000;
};

void run_iq(const CLI::App& cmd, const Context& ctx, const IqArgs& a) {
    const auto mixture = synth::thermal_mixture(a.t_mk * 1e-3, a.f_q_hz, a.separation, a.sigma);
    const auto cloud = synth::gen_iq(mixture, a.n_points, a.f_q_hz, a.c.seed);
    io::write_iq(a.c.out, cloud);
    report(cmd, ctx, a.c, {a.c.out, io::sidecar_path(a.c.out).string()});
}

// ---- phase -------------------------------------------------------------------

struct PhaseArgs {
    Common c;
    double f_g = 7.4593e9;
    double chi_over_2pi = -2.66e6;
    double kappa_g_over_2pi = 3.79e6;
    double kappa_e_over_2pi = 4.47e6;
    double eta_g = 1.0;
    double eta_e = 1.0;
    double tau_ns = 50.0;
    double theta0 = 0.7;
    double n_bar_readout = 0.16;
    double f_start = 7.4458e9;
    double f_stop = 7.4708e9;
    std::size_t n_points = 401;
    double noise = 0.0;
};

void run_phase(const CLI::App& cmd, const Context& ctx, const PhaseArgs& a) {
    synth::PhaseParams p;
    p.f_g = a.f_g;
    p.f_e = a.f_g + a.chi_over_2pi;
    p.kappa_g = two_pi * a.kappa_g_over_2pi;
    p.kappa_e = two_pi * a.kappa_e_over_2pi;
    p.eta_g = a.eta_g;
    p.eta_e = a.eta_e;
    p.tau_delay = a.tau_ns * 1e-9;
    p.theta0 = a.theta0;
    p.n_bar_readout = a.n_bar_readout;
    const auto sweep = synth::gen_phase(p, grid(a.f_start, a.f_stop, a.n_points), a.noise, a.c.seed);
    io::write_phase(a.c.out, sweep);
    report(cmd, ctx, a.c, {a.c.out, io::sidecar_path(a.c.out).string()});
}

}  // namespace

void add_synth(CLI::App& app, Context& ctx) {
    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic datasets in the formats the analysis commands read");
    synth_cmd->require_subcommand(1);

    auto d = std::make_shared<DecayArgs>();
    auto* decay = synth_cmd->add_subcommand("decay", "Decay trace");
    add_common(*decay, d->c);
    decay->add_option("--kind", d->kind, "relaxation | ramsey | echo")
        ->check(CLI::IsMember({"relaxation", "ramsey", "echo"}))
        ->capture_default_str();
    decay->add_option("--rate-per-s", d->rate, "Decay rate (1/s)")->capture_default_str();
    decay->add_option("--amplitude", d->amplitude, "Amplitude")->capture_default_str();
    decay->add_option("--offset", d->offset, "Constant offset")->capture_default_str();
    decay->add_option("--detuning-hz", d->detuning, "Ramsey detuning (Hz)")->capture_default_str();
    decay->add_option("--phase-rad", d->phase, "Ramsey phase (rad)")->capture_default_str();
    decay->add_option("--t-max-us", d->t_max_us, "Last delay (us); the grid starts at 0")->capture_default_str();
    decay->add_option("--n-points", d->n_points, "Number of delays")->capture_default_str();
    decay->add_option("--sigma", d->sigma, "Additive Gaussian noise on the signal")->capture_default_str();
    decay->add_option("--detuning-jitter-hz", d->detuning_jitter, "Shot-to-shot detuning spread (Hz)")->capture_default_str();
    decay->callback([decay, &ctx, d] { run_decay(*decay, ctx, *d); });

    auto h = std::make_shared<HeatpulseArgs>();
    auto* hp = synth_cmd->add_subcommand("heatpulse", "Heat-pulse series (uses the system parameters)");
    add_common(*hp, h->c);
    hp->add_option("--t0-mk", h->t0_mk, "Base temperature (mK)")->capture_default_str();
    hp->add_option("--delta-t-mk", h->delta_t_mk, "Temperature rise at t_cool = 0 (mK)")->capture_default_str();
    hp->add_option("--tau-ms", h->tau_ms, "Cooling time (ms)")->capture_default_str();
    hp->add_option("--gamma-offset-per-s", h->gamma_offset, "Rate offset added to Gamma2* (1/s)")->capture_default_str();
    hp->add_option("--f0-offset-hz", h->f0_offset, "Frequency offset added to Delta f (Hz)")->capture_default_str();
    hp->add_option("--t-max-ms", h->t_max_ms, "Last cooling time (ms); the grid starts at 0")->capture_default_str();
    hp->add_option("--n-points", h->n_points, "Number of cooling times")->capture_default_str();
    hp->add_option("--sigma-gamma-per-s", h->sigma_gamma, "Gaussian noise on Gamma2* (1/s)")->capture_default_str();
    hp->add_option("--sigma-f-hz", h->sigma_f_hz, "Gaussian noise on Delta f (Hz)")->capture_default_str();
    hp->add_option("--t-heat-s", h->t_heat, "Heat-pulse duration recorded in the sidecar (s)")->capture_default_str();
    hp->callback([hp, &ctx, h] { run_heatpulse(*hp, ctx, *h); });

    auto f = std::make_shared<FinArgs>();
    auto* fin = synth_cmd->add_subcommand("fin", "Fin power sweep");
    add_common(*fin, f->c);
    fin->add_option("--u", f->u, "Shape sqrt(R_s/R_t)")->capture_default_str();
    fin->add_option("--g", f->g, "Magnitude sqrt(R_s R_t) (K/W)")->capture_default_str();
    fin->add_option("--l-c-m", f->l_c, "Clamp length (m)")->capture_default_str();
    fin->add_option("--d-hc-m", f->d_hc, "Heater-side thermometer distance (m)")->capture_default_str();
    fin->add_option("--w-m", f->w, "Stripline width (m), metadata only")->capture_default_str();
    fin->add_option("--t-d-k", f->t_d, "Clamp temperature (K)")->capture_default_str();
    fin->add_option("--powers-uw", f->powers_uw, "Heater powers (uW)")->capture_default_str();
    fin->add_option("--noise-relative", f->noise_relative, "Gaussian noise relative to each temperature rise")
        ->capture_default_str();
    fin->add_option("--noise-absolute-k", f->noise_absolute, "Additive Gaussian noise on each temperature (K)")
        ->capture_default_str();
    fin->callback([fin, &ctx, f] { run_fin(*fin, ctx, *f); });

    auto q = std::make_shared<IqArgs>();
    auto* iq = synth_cmd->add_subcommand("iq", "Single-shot IQ cloud of a thermal qubit");
    add_common(*iq, q->c);
    iq->add_option("--t-mk", q->t_mk, "Qubit temperature (mK)")->capture_default_str();
    iq->add_option("--f-q-hz", q->f_q_hz, "Qubit frequency (Hz)")->capture_default_str();
    iq->add_option("--separation", q->separation, "Distance between the pointer states")->capture_default_str();
    iq->add_option("--sigma", q->sigma, "Isotropic width of each pointer state")->capture_default_str();
    iq->add_option("--n-points", q->n_points, "Number of single shots")->capture_default_str();
    iq->callback([iq, &ctx, q] { run_iq(*iq, ctx, *q); });

    auto p = std::make_shared<PhaseArgs>();
    auto* ph = synth_cmd->add_subcommand("phase", "Reflection phase pair for the two qubit states");
    add_common(*ph, p->c);
    ph->add_option("--f-g-hz", p->f_g, "Resonator frequency, qubit in ground state (Hz)")->capture_default_str();
    ph->add_option("--chi-over-2pi-hz", p->chi_over_2pi, "f_e - f_g (Hz)")->capture_default_str();
    ph->add_option("--kappa-g-over-2pi-hz", p->kappa_g_over_2pi, "Linewidth, ground state (Hz)")->capture_default_str();
    ph->add_option("--kappa-e-over-2pi-hz", p->kappa_e_over_2pi, "Linewidth, excited state (Hz)")->capture_default_str();
    ph->add_option("--eta-g", p->eta_g, "Coupling ratio kappa_c/kappa, ground state")->capture_default_str();
    ph->add_option("--eta-e", p->eta_e, "Coupling ratio kappa_c/kappa, excited state")->capture_default_str();
    ph->add_option("--tau-delay-ns", p->tau_ns, "Cable delay (ns)")->capture_default_str();
    ph->add_option("--theta0-rad", p->theta0, "Phase offset (rad)")->capture_default_str();
    ph->add_option("--n-bar-readout", p->n_bar_readout, "Readout photon number recorded in the sidecar")
        ->capture_default_str();
    ph->add_option("--f-start-hz", p->f_start, "First frequency (Hz)")->capture_default_str();
    ph->add_option("--f-stop-hz", p->f_stop, "Last frequency (Hz)")->capture_default_str();
    ph->add_option("--n-points", p->n_points, "Number of frequencies")->capture_default_str();
    ph->add_option("--noise-rad", p->noise, "Gaussian phase noise (rad)")->capture_default_str();
    ph->callback([ph, &ctx, p] { run_phase(*ph, ctx, *p); });
}

}  // namespace linetherm::cli
