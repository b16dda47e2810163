#pragma once

#include "linetherm/types.hpp"

#include <optional>
#include <string>

namespace linetherm::shotnoise {

/// Dephasing and AC-Stark response of the qubit to a thermal resonator
/// population.
struct ShotNoisePoint {
    double n_bar = 0.0;
    double gamma_n = 0.0;        // photon shot-noise dephasing rate (1/s)
    double delta_f_stark = 0.0;  // photon-number dependent shift (Hz)
    double lamb_shift = 0.0;     // (chi/2pi)/2 (Hz)

    /// Total qubit frequency shift, Stark plus Lamb.
    double delta_f_total() const noexcept { return delta_f_stark + lamb_shift; }
};

/// Full dispersive shot-noise expression,
///   Gamma + 2 pi i df = (kappa/2) (sqrt((1 + i chi/kappa)^2 + 4 i chi n / kappa) - 1),
/// on the square-root branch with non-negative real part.
ShotNoisePoint dephasing_full(double n_bar, const SystemParams& sys);

/// Small-photon-number limit,
///   Gamma + 2 pi i df_n = kappa chi (chi + i kappa) n / (kappa^2 + chi^2).
ShotNoisePoint dephasing_linear(double n_bar, const SystemParams& sys);

/// The linear form assumes |chi| <~ kappa; returns a message when violated.
std::optional<std::string> linear_regime_warning(const SystemParams& sys);

/// Inverts the real part of the full model by bisection on [0, n_max].
/// Throws OutOfRange when gamma_n exceeds the rate reached at n_max.
double photons_from_dephasing(double gamma_n, const SystemParams& sys, double n_max = 10.0);

/// Mean occupation 1/(exp(h f / k_B T) - 1) of a mode at frequency f.
double bose_einstein(double temperature, double f_hz);

/// Inverse of bose_einstein: T = (h f / k_B) / ln(1 + 1/n).
double temperature_from_photons(double n_bar, double f_hz);

}  // namespace linetherm::shotnoise
