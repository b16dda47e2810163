#include "linetherm/decoherence.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"
#include "linetherm/fitkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

namespace linetherm::decoherence {

std::string_view to_string(DecayKind kind) noexcept {
    switch (kind) {
        case DecayKind::Relaxation: return "relaxation";
        case DecayKind::Ramsey: return "ramsey";
        case DecayKind::Echo: return "echo";
    }
    return "relaxation";
}

DecayKind decay_kind_from_string(std::string_view name) {
    if (name == "relaxation" || name == "t1") return DecayKind::Relaxation;
    if (name == "ramsey") return DecayKind::Ramsey;
    if (name == "echo") return DecayKind::Echo;
    throw Error(Errc::InvalidArgument, "unknown decay kind '" + std::string(name) + "'");
}

std::string_view rate_parameter(DecayKind kind) noexcept {
    switch (kind) {
        case DecayKind::Relaxation: return "gamma1";
        case DecayKind::Ramsey: return "gamma2_star";
        case DecayKind::Echo: return "gamma2_echo";
    }
    return "gamma1";
}

void DecayTrace::validate() const {
    if (times.size() != signal.size()) throw Error(Errc::InvalidArgument, "DecayTrace: times/signal length mismatch");
    if (!sigma.empty() && sigma.size() != times.size()) {
        throw Error(Errc::InvalidArgument, "DecayTrace: sigma length mismatch");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(signal[i])) {
            throw Error(Errc::InvalidArgument, "DecayTrace: non-finite sample");
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw Error(Errc::InvalidArgument, "DecayTrace: times must be strictly increasing");
        }
    }
    for (double s : sigma) {
        if (!(s > 0.0) || !std::isfinite(s)) throw Error(Errc::InvalidArgument, "DecayTrace: sigma must be > 0");
    }
}

double relaxation_model(double t, double amplitude, double rate, double offset) noexcept {
    return amplitude * std::exp(-rate * t) + offset;
}

double ramsey_model(double t, double amplitude, double rate, double detuning, double phase, double offset) noexcept {
    return amplitude * std::exp(-rate * t) * std::cos(two_pi * detuning * t + phase) + offset;
}

namespace {

void check_trace(const DecayTrace& trace, DecayKind expected, std::size_t min_points) {
    trace.validate();
    if (trace.kind != expected) {
        throw Error(Errc::InvalidArgument, "trace kind is '" + std::string(to_string(trace.kind)) +
                                               "', expected '" + std::string(to_string(expected)) + "'");
    }
    if (trace.times.size() < min_points) {
        throw Error(Errc::InsufficientData, std::string(to_string(expected)) + " fit needs at least " +
                                                std::to_string(min_points) + " points");
    }
}

std::vector<double> weights_of(const DecayTrace& trace) {
    std::vector<double> w;
    w.reserve(trace.sigma.size());
    for (double s : trace.sigma) w.push_back(1.0 / s);
    return w;
}

double span_of(const DecayTrace& trace) { return trace.times.back() - trace.times.front(); }

/// Decay rate from the log-slope of |signal - offset| over the points that
/// still carry at least 5 % of the initial excursion.
double log_slope_rate(const DecayTrace& trace, double offset) {
    const double fallback = 3.0 / std::max(span_of(trace), 1e-300);
    const double first = std::abs(trace.signal.front() - offset);
    if (!(first > 0.0)) return fallback;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const double y = std::abs(trace.signal[i] - offset);
        if (y < 0.05 * first) break;
        const double t = trace.times[i];
        const double ly = std::log(y);
        sx += t; sy += ly; sxx += t * t; sxy += t * ly;
        ++n;
    }
    if (n < 2) return fallback;
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    if (!(denom > 0.0)) return fallback;
    const double slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
    return slope < 0.0 ? -slope : fallback;
}

/// Solves the linear least-squares problem for the coefficients of the
/// given basis columns.
Eigen::VectorXd linear_coefficients(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y) {
    return basis.completeOrthogonalDecomposition().solve(y);
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

fit::LmOptions reporting_options() {
    fit::LmOptions opt;
    opt.throw_on_failure = false;
    return opt;
}

FitResult fit_exponential(const DecayTrace& trace, DecayKind kind) {
    check_trace(trace, kind, 4);
    const auto n = static_cast<Eigen::Index>(trace.times.size());
    const Eigen::VectorXd t = as_vector(trace.times);
    const Eigen::VectorXd y = as_vector(trace.signal);

    const double rate0 = log_slope_rate(trace, trace.signal.back());
    Eigen::MatrixXd basis(n, 2);
    basis.col(0) = (-rate0 * t.array()).exp().matrix();
    basis.col(1).setOnes();
    const Eigen::VectorXd ab = linear_coefficients(basis, y);

    const std::string rate_name(rate_parameter(kind));
    const std::vector<fit::ParamSpec> specs = {
        {"A", ab[0], fit::Transform::free()},
        {rate_name, rate0, fit::Transform::positive()},
        {"B", ab[1], fit::Transform::free()},
    };
    fit::ResidualProblem prob;
    prob.n_residuals = trace.times.size();
    prob.weights = weights_of(trace);
    prob.residuals = [&trace](std::span<const double> p, std::span<double> r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = relaxation_model(trace.times[i], p[0], p[1], p[2]) - trace.signal[i];
        }
        return true;
    };
    FitResult res = fit::lm_fit(prob, specs, reporting_options());
    if (res.rank_deficient) {
        res.converged = false;
        res.warnings.push_back("decay rate not constrained by the data (flat or zero-amplitude trace)");
    }
    return res;
}

double median_spacing(const std::vector<double>& times) {
    std::vector<double> dt;
    dt.reserve(times.size());
    for (std::size_t i = 1; i < times.size(); ++i) dt.push_back(times[i] - times[i - 1]);
    std::nth_element(dt.begin(), dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2), dt.end());
    return dt[dt.size() / 2];
}

/// Frequency of the largest discrete Fourier amplitude of the mean-removed
/// signal, scanned from 0 to the Nyquist frequency of the median spacing.
double dft_peak_frequency(const DecayTrace& trace) {
    const auto& t = trace.times;
    const auto& s = trace.signal;
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    const double nyquist = 0.5 / median_spacing(t);
    const double df = 1.0 / (8.0 * span_of(trace));
    const auto n_freq = static_cast<std::size_t>(std::ceil(nyquist / df)) + 1;
    double best_f = 0.0;
    double best_amp = -1.0;
    for (std::size_t k = 0; k < n_freq; ++k) {
        const double f = std::min(static_cast<double>(k) * df, nyquist);
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < t.size(); ++i) {
            acc += (s[i] - mean) * std::polar(1.0, -two_pi * f * t[i]);
        }
        const double amp = std::abs(acc);
        if (amp > best_amp) {
            best_amp = amp;
            best_f = f;
        }
    }
    return best_f;
}

double wrap_phase(double phi) {
    constexpr double pi = std::numbers::pi;
    double w = std::remainder(phi, 2.0 * pi);
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

/// Without fringes the detuning and phase drop out of the Jacobian and
/// the damped iteration creeps along a flat valley. A plain envelope fit
/// is then exact; it replaces the Ramsey estimate when it fits at least as
/// well, with detuning and phase pinned at zero and their (huge)
/// variances kept from the rank-deficient covariance.
FitResult fringe_free_fallback(const DecayTrace& trace, FitResult ramsey) {
    DecayTrace envelope_trace = trace;
    envelope_trace.kind = DecayKind::Echo;
    const FitResult env = fit_exponential(envelope_trace, DecayKind::Echo);
    if (!(env.residual_norm <= ramsey.residual_norm)) return ramsey;

    const std::array<Eigen::Index, 3> from{static_cast<Eigen::Index>(env.index("A")),
                                           static_cast<Eigen::Index>(env.index("gamma2_echo")),
                                           static_cast<Eigen::Index>(env.index("B"))};
    const std::array<Eigen::Index, 3> to{static_cast<Eigen::Index>(ramsey.index("A")),
                                         static_cast<Eigen::Index>(ramsey.index("gamma2_star")),
                                         static_cast<Eigen::Index>(ramsey.index("B"))};
    FitResult out = ramsey;
    out.values.setZero();
    for (std::size_t a = 0; a < 3; ++a) out.values[to[a]] = env.values[from[a]];
    for (const Eigen::Index k : to) {
        out.covariance.row(k).setZero();
        out.covariance.col(k).setZero();
    }
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) out.covariance(to[a], to[b]) = env.covariance(from[a], from[b]);
    }
    out.sigmas = out.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    out.residual_norm = env.residual_norm;
    out.n_iterations += env.n_iterations;
    out.converged = ramsey.converged && env.converged;
    out.status = env.status;
    if (out.values[to[0]] < 0.0) {
        // A cos(pi) = -A: keep A >= 0 with the phase at pi.
        out.values[to[0]] = -out.values[to[0]];
        out.values[static_cast<Eigen::Index>(out.index("phase"))] = std::numbers::pi;
        out.covariance.row(to[0]) *= -1.0;
        out.covariance.col(to[0]) *= -1.0;
    }
    return out;
}

}  // namespace

FitResult fit_relaxation(const DecayTrace& trace) { return fit_exponential(trace, DecayKind::Relaxation); }

FitResult fit_echo(const DecayTrace& trace) { return fit_exponential(trace, DecayKind::Echo); }

FitResult fit_ramsey(const DecayTrace& trace) {
    check_trace(trace, DecayKind::Ramsey, 8);
    const auto n = static_cast<Eigen::Index>(trace.times.size());
    const Eigen::VectorXd t = as_vector(trace.times);
    const Eigen::VectorXd y = as_vector(trace.signal);

    const double detuning0 = dft_peak_frequency(trace);

    // Envelope decay from the RMS excursion in the two halves of the trace.
    const Eigen::Index half = n / 2;
    const double mean = y.mean();
    const double rms1 = std::sqrt((y.head(half).array() - mean).square().mean());
    const double rms2 = std::sqrt((y.tail(n - half).array() - mean).square().mean());
    const double dtc = t.tail(n - half).mean() - t.head(half).mean();
    double rate0 = 3.0 / span_of(trace);
    if (rms1 > 0.0 && rms2 > 0.0 && rms1 > rms2 && dtc > 0.0) rate0 = std::log(rms1 / rms2) / dtc;

    Eigen::MatrixXd basis(n, 3);
    const Eigen::ArrayXd env = (-rate0 * t.array()).exp();
    basis.col(0) = (env * (two_pi * detuning0 * t.array()).cos()).matrix();
    basis.col(1) = (env * (two_pi * detuning0 * t.array()).sin()).matrix();
    basis.col(2).setOnes();
    const Eigen::VectorXd c = linear_coefficients(basis, y);
    // a cos(x) + b sin(x) = A cos(x + phi) with A = hypot(a, b), phi = atan2(-b, a)
    const double amp0 = std::hypot(c[0], c[1]);
    const double phase0 = std::atan2(-c[1], c[0]);

    const std::vector<fit::ParamSpec> specs = {
        {"A", amp0, fit::Transform::free()},
        {"gamma2_star", rate0, fit::Transform::positive()},
        {"detuning", detuning0, fit::Transform::free()},
        {"phase", phase0, fit::Transform::free()},
        {"B", c[2], fit::Transform::free()},
    };
    fit::ResidualProblem prob;
    prob.n_residuals = trace.times.size();
    prob.weights = weights_of(trace);
    prob.residuals = [&trace](std::span<const double> p, std::span<double> r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            r[i] = ramsey_model(trace.times[i], p[0], p[1], p[2], p[3], p[4]) - trace.signal[i];
        }
        return true;
    };
    FitResult res = fit::lm_fit(prob, specs, reporting_options());

    const auto ia = static_cast<Eigen::Index>(res.index("A"));
    const auto ip = static_cast<Eigen::Index>(res.index("phase"));
    if (res.values[ia] < 0.0) {
        res.values[ia] = -res.values[ia];
        res.values[ip] += std::numbers::pi;
        res.covariance.row(ia) *= -1.0;
        res.covariance.col(ia) *= -1.0;
    }
    res.values[ip] = wrap_phase(res.values[ip]);

    const double nyquist = 0.5 / median_spacing(trace.times);
    const double detuning = res.value("detuning");
    if (std::abs(detuning) > nyquist) {
        res.warnings.push_back("AliasWarning: fitted detuning " + std::to_string(detuning) +
                               " Hz exceeds the sampling Nyquist frequency " + std::to_string(nyquist) + " Hz");
    }
    if (res.rank_deficient) {
        res = fringe_free_fallback(trace, std::move(res));
        res.warnings.push_back("detuning/phase not constrained by the data (fringe-free trace)");
    }
    return res;
}

FitResult fit_trace(const DecayTrace& trace) {
    switch (trace.kind) {
        case DecayKind::Relaxation: return fit_relaxation(trace);
        case DecayKind::Ramsey: return fit_ramsey(trace);
        case DecayKind::Echo: return fit_echo(trace);
    }
    throw Error(Errc::InvalidArgument, "unknown decay kind");
}

double pure_dephasing(double gamma2, double gamma1) {
    if (!std::isfinite(gamma2) || !std::isfinite(gamma1) || gamma1 < 0.0) {
        throw Error(Errc::InvalidArgument, "rates must be finite, gamma1 >= 0");
    }
    const double half = 0.5 * gamma1;
    if (gamma2 < half) {
        throw Error(Errc::NegativeDephasing, "gamma2 < gamma1/2: coherence exceeds the relaxation limit");
    }
    return gamma2 - half;
}

RateSummary summarize_rates(std::span<const double> samples) {
    if (samples.size() < 2) throw Error(Errc::InsufficientData, "rate summary needs at least two samples");
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    return RateSummary{mean, std::sqrt(ss / n), samples.size()};
}

}  // namespace linetherm::decoherence
