#pragma once

#include "linetherm/fit_result.hpp"
#include "linetherm/fitkit.hpp"
#include "linetherm/types.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace linetherm::heatpulse {

/// Single black-body emitter heated by Delta T and relaxing back to T0
/// with time constant tau_cool. `gamma_offset` and `f0_offset` are the
/// additive offsets that appear in measured Gamma2* and qubit frequency.
struct HeatPulseModelParams {
    double t0 = 0.0;           // K
    double delta_t = 0.0;      // K
    double tau_cool = 0.0;     // s
    double gamma_offset = 0.0; // 1/s
    double f0_offset = 0.0;    // Hz

    void validate() const;
};

struct TrajectoryPoint {
    double gamma_n = 0.0;  // 1/s
    double delta_f = 0.0;  // photon-number dependent shift, Hz
};

/// T(t) = T0 + Delta T exp(-t / tau).
double temperature_at(const HeatPulseModelParams& params, double t_cool);

/// Shot-noise response to the black-body population at time t_cool.
TrajectoryPoint trajectory(const HeatPulseModelParams& params, const SystemParams& sys, double t_cool);

struct OffsetCalibration {
    double offset = 0.0;  // 1/s, subtract from Gamma2*
    std::size_t n_tail = 0;
    bool low_confidence = false;  // set for a single-sample tail
};

/// offset = mean(tail) - baseline, so that the corrected rates approach
/// the independently measured baseline at long cooling times.
OffsetCalibration calibrate_offset(std::span<const double> gamma2_star_tail, double gamma_n_baseline);

struct CoolingOptions {
    /// Fit T0 as an extra shared parameter instead of keeping it fixed.
    bool fit_t0 = false;
    /// Subtracted from every Gamma2* sample before fitting.
    double gamma_offset = 0.0;
    /// Known noise levels; when absent each residual block is normalized
    /// by its own RMS spread.
    std::optional<double> sigma_gamma;
    std::optional<double> sigma_f;
    std::optional<double> tau_initial;
    fit::LmOptions lm{};
};

/// Joint fit of Gamma_n(t_cool) and Delta f(t_cool) across heat-pulse
/// datasets. Parameters: tau_cool (shared), f0_offset (shared), delta_T
/// per dataset (`delta_T[k]` when more than one dataset), and T0 when
/// `fit_t0` is set.
FitResult fit_cooling(std::span<const HeatPulseSeries> datasets, const SystemParams& sys, double t0,
                      const CoolingOptions& options = {});

struct CoolingAnalysis {
    OffsetCalibration calibration;
    double baseline = 0.0;  // Gamma_n at T0 used for the calibration
    FitResult fit;
};

/// Calibrates the Gamma2* offset from all samples with t_cool >= tail_start
/// against the model baseline Gamma_n(T0) (or `baseline` if given), then
/// runs fit_cooling on the corrected rates.
CoolingAnalysis analyze_cooling(std::span<const HeatPulseSeries> datasets, const SystemParams& sys, double t0,
                                double tail_start, std::optional<double> baseline = std::nullopt,
                                CoolingOptions options = {});

}  // namespace linetherm::heatpulse
