#pragma once

#include "linetherm/fit_result.hpp"
#include "linetherm/fitkit.hpp"

#include <span>
#include <vector>

namespace linetherm::resonator {

/// Readout-resonator phase response measured with the qubit prepared in
/// the ground (g) and excited (e) state.
struct PhaseSweep {
    std::vector<double> frequencies;  // Hz, strictly increasing
    std::vector<double> phase_g;      // rad
    std::vector<double> phase_e;      // rad
    double n_bar_readout = 0.0;       // metadata

    void validate() const;
};

/// arg S11 - 2 pi f tau_delay + theta0 with S11 = 1 - kappa_c / (kappa/2 + 2 pi i (f - f0)).
///
/// The resonance part is the continuous branch: for an over-coupled
/// resonator (kappa_c > kappa/2) it falls from 2 pi far below f0 through
/// pi at f0 to 0 far above it.
double reflection_phase(double f, double f0, double kappa, double kappa_c, double tau_delay, double theta0);

/// Removes 2 pi jumps between consecutive samples.
std::vector<double> unwrap_phase(std::span<const double> phase);

struct PhaseFitOptions {
    /// Fit the coupling ratios kappa_c/kappa per state ("eta_g", "eta_e")
    /// instead of assuming a fully external linewidth.
    bool fit_coupling = false;
    fit::LmOptions lm{};
};

/// Fits both traces with shared tau_delay and theta0. Parameters: f_g,
/// f_e, kappa_g, kappa_e (rad/s), tau_delay, theta0; derived quantities
/// chi = 2 pi (f_e - f_g) and kappa_mean = (kappa_g + kappa_e)/2.
FitResult fit_phase_pair(const PhaseSweep& sweep, const PhaseFitOptions& options = {});

struct ChiPoint {
    double n_bar = 0.0;
    double chi = 0.0;  // rad/s
};

struct ChiExtrapolation {
    double chi0 = 0.0;  // rad/s
    double sigma = 0.0;
    bool linear_fallback = false;
    FitResult fit;
};

/// Extrapolates chi to vanishing photon number with
/// chi(n) = chi0 + a (1 - exp(-n / n_c)); with three points or fewer a
/// straight line is used instead.
ChiExtrapolation extrapolate_chi(std::span<const ChiPoint> points);

}  // namespace linetherm::resonator
