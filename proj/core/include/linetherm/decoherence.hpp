#pragma once

#include "linetherm/fit_result.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace linetherm::decoherence {

enum class DecayKind { Relaxation, Ramsey, Echo };

std::string_view to_string(DecayKind kind) noexcept;
DecayKind decay_kind_from_string(std::string_view name);

struct DecayTrace {
    DecayKind kind = DecayKind::Relaxation;
    std::vector<double> times;   // s
    std::vector<double> signal;  // arbitrary units
    std::vector<double> sigma;   // optional per-point uncertainty

    void validate() const;
};

struct RateSummary {
    double mean = 0.0;
    double sigma = 0.0;
    std::size_t n_samples = 0;
};

/// A exp(-gamma1 t) + B. Parameters: A, gamma1, B.
FitResult fit_relaxation(const DecayTrace& trace);

/// A exp(-gamma2_star t) cos(2 pi detuning t + phase) + B.
/// Parameters: A, gamma2_star, detuning, phase, B. The phase is reported
/// wrapped to (-pi, pi] with A >= 0.
FitResult fit_ramsey(const DecayTrace& trace);

/// A exp(-gamma2_echo t) + B. Parameters: A, gamma2_echo, B.
FitResult fit_echo(const DecayTrace& trace);

/// Dispatches on trace.kind.
FitResult fit_trace(const DecayTrace& trace);

/// Name of the decay-rate parameter for a given trace kind.
std::string_view rate_parameter(DecayKind kind) noexcept;

/// Pure dephasing gamma2 - gamma1/2. Throws NegativeDephasing when gamma2 < gamma1/2.
double pure_dephasing(double gamma2, double gamma1);

/// Maximum-likelihood Gaussian (mean, population standard deviation).
RateSummary summarize_rates(std::span<const double> samples);

/// Model evaluation shared by the fits and the generators.
double relaxation_model(double t, double amplitude, double rate, double offset) noexcept;
double ramsey_model(double t, double amplitude, double rate, double detuning, double phase, double offset) noexcept;

}  // namespace linetherm::decoherence
