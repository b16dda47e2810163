#include "linetherm/synth.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"
#include "linetherm/fin.hpp"
#include "linetherm/random.hpp"

#include <cmath>
#include <limits>

namespace linetherm::synth {

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "linspace needs n >= 1");
    if (n == 1) return {a};
    std::vector<double> out(n);
    const double step = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + step * static_cast<double>(i);
    out.back() = b;
    return out;
}

decoherence::DecayTrace gen_decay(decoherence::DecayKind kind, const DecayParams& params,
                                  std::span<const double> grid, const DecayNoise& noise, std::uint64_t seed) {
    if (grid.empty()) throw Error(Errc::InvalidArgument, "gen_decay: empty time grid");
    if (!(noise.sigma >= 0.0) || !(noise.detuning_jitter >= 0.0)) {
        throw Error(Errc::InvalidArgument, "gen_decay: noise levels must be >= 0");
    }
    if (kind != decoherence::DecayKind::Relaxation && kind != decoherence::DecayKind::Ramsey &&
        kind != decoherence::DecayKind::Echo) {
        throw Error(Errc::InvalidArgument, "gen_decay: invalid decay kind");
    }
    Stream signal_noise(seed, "decay.signal");
    Stream detuning_noise(seed, "decay.detuning");
    const double detuning = params.detuning + noise.detuning_jitter * detuning_noise.normal();

    decoherence::DecayTrace trace;
    trace.kind = kind;
    trace.times.assign(grid.begin(), grid.end());
    trace.signal.reserve(grid.size());
    for (const double t : grid) {
        const double clean = kind == decoherence::DecayKind::Ramsey
                                 ? decoherence::ramsey_model(t, params.amplitude, params.rate, detuning,
                                                             params.phase, params.offset)
                                 : decoherence::relaxation_model(t, params.amplitude, params.rate, params.offset);
        trace.signal.push_back(noise.sigma > 0.0 ? clean + noise.sigma * signal_noise.normal() : clean);
    }
    return trace;
}

HeatPulseSeries gen_heatpulse(const heatpulse::HeatPulseModelParams& model, const SystemParams& sys,
                              std::span<const double> t_grid, const HeatPulseNoise& noise, std::uint64_t seed,
                              double t_heat) {
    model.validate();
    sys.validate();
    if (!(noise.sigma_gamma >= 0.0) || !(noise.sigma_f >= 0.0)) {
        throw Error(Errc::InvalidArgument, "gen_heatpulse: noise levels must be >= 0");
    }
    Stream gamma_noise(seed, "heatpulse.gamma");
    Stream f_noise(seed, "heatpulse.delta_f");
    HeatPulseSeries series;
    series.t_heat = t_heat;
    series.samples.reserve(t_grid.size());
    for (const double t : t_grid) {
        const auto point = heatpulse::trajectory(model, sys, t);
        HeatPulseSample s;
        s.t_cool = t;
        s.gamma2_star = point.gamma_n + model.gamma_offset;
        s.delta_f = point.delta_f + model.f0_offset;
        if (noise.sigma_gamma > 0.0) s.gamma2_star += noise.sigma_gamma * gamma_noise.normal();
        if (noise.sigma_f > 0.0) s.delta_f += noise.sigma_f * f_noise.normal();
        series.samples.push_back(s);
    }
    series.validate();
    return series;
}

FinExperiment gen_fin(double u, double g, const FinGeometry& geometry, double t_d, std::span<const double> powers,
                      const FinNoise& noise, std::uint64_t seed) {
    if (!(noise.relative >= 0.0) || !(noise.absolute >= 0.0)) {
        throw Error(Errc::InvalidArgument, "gen_fin: noise levels must be >= 0");
    }
    FinExperiment exp;
    exp.l_c = geometry.l_c;
    exp.d_hc = geometry.d_hc;
    exp.w = geometry.w;
    const auto slopes = fin::predicted_diffs(fin::FinParams::from_shape(u, g, geometry.l_c, geometry.d_hc, t_d, 0.0));
    Stream h_noise(seed, "fin.t_h");
    Stream o_noise(seed, "fin.t_o");
    for (const double p : powers) {
        if (!(p >= 0.0)) throw Error(Errc::InvalidArgument, "gen_fin: heater powers must be >= 0");
        double rise_h = p * slopes.slope_h;
        double rise_o = p * slopes.slope_o;
        if (noise.relative > 0.0) {
            rise_h *= 1.0 + noise.relative * h_noise.normal();
            rise_o *= 1.0 + noise.relative * o_noise.normal();
        }
        FinRecord r{p, t_d + rise_h, t_d + rise_o, t_d};
        if (noise.absolute > 0.0) {
            r.t_h += noise.absolute * h_noise.normal();
            r.t_o += noise.absolute * o_noise.normal();
        }
        exp.records.push_back(r);
    }
    exp.validate(std::numeric_limits<double>::infinity());
    return exp;
}

IQCloud gen_iq(const iq::MixtureModel& mixture, std::size_t n_points, double f_q, std::uint64_t seed) {
    mixture.validate();
    Stream label(seed, "iq.label");
    Stream noise(seed, "iq.noise");
    std::array<Eigen::Matrix2d, 2> chol;
    for (std::size_t k = 0; k < 2; ++k) {
        Eigen::LLT<Eigen::Matrix2d> llt(mixture.covariances[k]);
        if (llt.info() != Eigen::Success) throw Error(Errc::InvalidArgument, "gen_iq: covariance not positive definite");
        chol[k] = llt.matrixL();
    }
    IQCloud cloud;
    cloud.f_q = f_q;
    cloud.points.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const std::size_t k = label.uniform() < mixture.weights[0] ? 0 : 1;
        const Eigen::Vector2d z(noise.normal(), noise.normal());
        const Eigen::Vector2d x = mixture.means[k] + chol[k] * z;
        cloud.points.push_back({x[0], x[1]});
    }
    cloud.validate();
    return cloud;
}

iq::MixtureModel thermal_mixture(double temperature, double f_q, double separation, double sigma) {
    if (!(temperature > 0.0) || !(f_q > 0.0) || !(sigma > 0.0)) {
        throw Error(Errc::InvalidArgument, "thermal_mixture: temperature, f_q and sigma must be > 0");
    }
    const double boltzmann = std::exp(-photon_temperature(f_q) / temperature);
    iq::MixtureModel m;
    m.weights = {1.0 / (1.0 + boltzmann), boltzmann / (1.0 + boltzmann)};
    m.means = {Eigen::Vector2d(-0.5 * separation, 0.0), Eigen::Vector2d(0.5 * separation, 0.0)};
    m.covariances = {Eigen::Matrix2d::Identity() * sigma * sigma, Eigen::Matrix2d::Identity() * sigma * sigma};
    return m;
}

resonator::PhaseSweep gen_phase(const PhaseParams& params, std::span<const double> f_grid, double noise,
                                std::uint64_t seed) {
    if (!(noise >= 0.0)) throw Error(Errc::InvalidArgument, "gen_phase: noise must be >= 0");
    Stream g_noise(seed, "phase.g");
    Stream e_noise(seed, "phase.e");
    resonator::PhaseSweep sweep;
    sweep.n_bar_readout = params.n_bar_readout;
    sweep.frequencies.assign(f_grid.begin(), f_grid.end());
    for (const double f : f_grid) {
        double pg = resonator::reflection_phase(f, params.f_g, params.kappa_g, params.eta_g * params.kappa_g,
                                                params.tau_delay, params.theta0);
        double pe = resonator::reflection_phase(f, params.f_e, params.kappa_e, params.eta_e * params.kappa_e,
                                                params.tau_delay, params.theta0);
        if (noise > 0.0) {
            pg += noise * g_noise.normal();
            pe += noise * e_noise.normal();
        }
        sweep.phase_g.push_back(pg);
        sweep.phase_e.push_back(pe);
    }
    sweep.validate();
    return sweep;
}

}  // namespace linetherm::synth
