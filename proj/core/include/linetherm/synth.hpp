#pragma once

#include "linetherm/decoherence.hpp"
#include "linetherm/heatpulse.hpp"
#include "linetherm/iqtemp.hpp"
#include "linetherm/resonator.hpp"
#include "linetherm/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

/// Seeded forward models used as independent oracles for the fits.
///
/// Every observable draws from its own named `Stream`, so the same
/// (parameters, seed) always produces bit-identical output and adding an
/// observable never perturbs the existing ones.
namespace linetherm::synth {

/// n equally spaced points from a to b inclusive (n >= 2), or {a} for n == 1.
std::vector<double> linspace(double a, double b, std::size_t n);

struct DecayParams {
    double amplitude = 1.0;
    double rate = 0.0;       // 1/s
    double offset = 0.0;
    double detuning = 0.0;   // Hz, Ramsey only
    double phase = 0.0;      // rad, Ramsey only
};

struct DecayNoise {
    double sigma = 0.0;            // additive Gaussian noise on the signal
    double detuning_jitter = 0.0;  // Hz, Gaussian shot-to-shot spread of the Ramsey detuning
};

decoherence::DecayTrace gen_decay(decoherence::DecayKind kind, const DecayParams& params,
                                  std::span<const double> grid, const DecayNoise& noise, std::uint64_t seed);

struct HeatPulseNoise {
    double sigma_gamma = 0.0;  // 1/s
    double sigma_f = 0.0;      // Hz
};

/// Gamma2* = Gamma_n(t) + gamma_offset + noise and Delta f = Delta f_n(t) + f0_offset + noise.
HeatPulseSeries gen_heatpulse(const heatpulse::HeatPulseModelParams& model, const SystemParams& sys,
                              std::span<const double> t_grid, const HeatPulseNoise& noise, std::uint64_t seed,
                              double t_heat = 0.0);

struct FinGeometry {
    double l_c = 0.0;   // m
    double d_hc = 0.0;  // m
    double w = 0.0;     // m
};

struct FinNoise {
    double relative = 0.0;  // Gaussian noise relative to each temperature rise
    double absolute = 0.0;  // K, additive Gaussian noise on each temperature
};

/// Thermometer readings predicted by the continuum fin model for
/// R_s = u g, R_t = g / u at every heater power.
FinExperiment gen_fin(double u, double g, const FinGeometry& geometry, double t_d, std::span<const double> powers,
                      const FinNoise& noise, std::uint64_t seed);

/// Samples n points from the mixture; labels follow the component weights.
IQCloud gen_iq(const iq::MixtureModel& mixture, std::size_t n_points, double f_q, std::uint64_t seed);

/// Mixture at temperature T for qubit frequency f_q with pointer states
/// centred at (-separation/2, 0) and (+separation/2, 0) and isotropic width sigma.
iq::MixtureModel thermal_mixture(double temperature, double f_q, double separation, double sigma);

struct PhaseParams {
    double f_g = 0.0;      // Hz
    double f_e = 0.0;      // Hz
    double kappa_g = 0.0;  // rad/s
    double kappa_e = 0.0;  // rad/s
    double eta_g = 1.0;    // kappa_c / kappa
    double eta_e = 1.0;
    double tau_delay = 0.0;  // s
    double theta0 = 0.0;     // rad
    double n_bar_readout = 0.0;
};

resonator::PhaseSweep gen_phase(const PhaseParams& params, std::span<const double> f_grid, double noise,
                                std::uint64_t seed);

}  // namespace linetherm::synth
