#include "linetherm/resonator.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

namespace linetherm::resonator {

using std::numbers::pi;

void PhaseSweep::validate() const {
    const std::size_t n = frequencies.size();
    if (phase_g.size() != n || phase_e.size() != n) throw Error(Errc::InvalidArgument, "PhaseSweep: length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(frequencies[i]) || !std::isfinite(phase_g[i]) || !std::isfinite(phase_e[i])) {
            throw Error(Errc::InvalidArgument, "PhaseSweep: non-finite sample");
        }
        if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
            throw Error(Errc::InvalidArgument, "PhaseSweep: frequencies must be strictly increasing");
        }
    }
}

double reflection_phase(double f, double f0, double kappa, double kappa_c, double tau_delay, double theta0) {
    if (!(kappa > 0.0)) throw Error(Errc::InvalidArgument, "kappa must be > 0");
    if (!(kappa_c > 0.0 && kappa_c <= kappa)) throw Error(Errc::InvalidArgument, "need 0 < kappa_c <= kappa");
    const double detuning = two_pi * (f - f0);
    const double a = 0.5 * kappa - kappa_c;
    double numerator;
    if (a > 0.0) {
        numerator = std::atan(detuning / a);
    } else if (a < 0.0) {
        numerator = pi - std::atan(detuning / -a);
    } else {
        numerator = detuning < 0.0 ? -0.5 * pi : 0.5 * pi;
    }
    const double denominator = std::atan(detuning / (0.5 * kappa));
    return numerator - denominator - two_pi * f * tau_delay + theta0;
}

std::vector<double> unwrap_phase(std::span<const double> phase) {
    std::vector<double> out(phase.begin(), phase.end());
    double shift = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double jump = phase[i] - phase[i - 1];
        shift -= two_pi * std::round(jump / two_pi);
        out[i] = phase[i] + shift;
    }
    return out;
}

namespace {

struct ResonanceGuess {
    double f0;
    double kappa;
    double tau;
    double theta_ref;  // phase offset at f_ref
};

double slope_of(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

/// Frequency where `y` first crosses `level` going downwards, linearly
/// interpolated; falls back to the closest sample.
double crossing(std::span<const double> f, std::span<const double> y, double level) {
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (y[i - 1] >= level && y[i] < level) {
            const double t = (y[i - 1] - level) / (y[i - 1] - y[i]);
            return f[i - 1] + t * (f[i] - f[i - 1]);
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (std::abs(y[i] - level) < std::abs(y[best] - level)) best = i;
    }
    return f[best];
}

ResonanceGuess guess_resonance(std::span<const double> f, std::span<const double> phase, double f_ref) {
    const std::size_t n = f.size();
    const std::size_t edge = std::max<std::size_t>(3, n / 10);
    const double s_left = slope_of(f.first(edge), phase.first(edge));
    const double s_right = slope_of(f.last(edge), phase.last(edge));
    const double tau = -0.5 * (s_left + s_right) / two_pi;

    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = phase[i] + two_pi * (f[i] - f_ref) * tau;
    double theta_ref = 0.0;
    for (std::size_t i = n - edge; i < n; ++i) theta_ref += psi[i];
    theta_ref /= static_cast<double>(edge);
    for (auto& v : psi) v -= theta_ref;

    const double f0 = crossing(f, psi, pi);
    const double f_lo = crossing(f, psi, 1.5 * pi);
    const double f_hi = crossing(f, psi, 0.5 * pi);
    double kappa = two_pi * (f_hi - f_lo);
    if (!(kappa > 0.0)) kappa = two_pi * (f.back() - f.front()) / 10.0;
    return {f0, kappa, tau, theta_ref};
}

}  // namespace

FitResult fit_phase_pair(const PhaseSweep& sweep, const PhaseFitOptions& options) {
    sweep.validate();
    const std::size_t n = sweep.frequencies.size();
    if (n < 8) throw Error(Errc::InsufficientData, "phase fit needs at least 8 frequencies");
    const auto& f = sweep.frequencies;
    const double f_ref = 0.5 * (f.front() + f.back());

    std::vector<double> pg = unwrap_phase(sweep.phase_g);
    std::vector<double> pe = unwrap_phase(sweep.phase_e);
    // Both traces share theta0: align their 2 pi branches on the low-frequency edge.
    const std::size_t edge = std::max<std::size_t>(3, n / 10);
    double diff = 0.0;
    for (std::size_t i = 0; i < edge; ++i) diff += pe[i] - pg[i];
    const double k = std::round(diff / static_cast<double>(edge) / two_pi);
    for (auto& v : pe) v -= two_pi * k;

    const ResonanceGuess gg = guess_resonance(f, pg, f_ref);
    const ResonanceGuess ge = guess_resonance(f, pe, f_ref);

    std::vector<fit::ParamSpec> specs = {
        // Resonance frequencies are fitted as offsets from f_ref so that the
        // step-size test sees MHz-scale numbers rather than GHz.
        {"f_g", gg.f0 - f_ref, fit::Transform::free()},
        {"f_e", ge.f0 - f_ref, fit::Transform::free()},
        {"kappa_g", gg.kappa, fit::Transform::positive()},
        {"kappa_e", ge.kappa, fit::Transform::positive()},
        {"tau_delay", 0.5 * (gg.tau + ge.tau), fit::Transform::free()},
        {"theta_ref", 0.5 * (gg.theta_ref + ge.theta_ref), fit::Transform::free()},
    };

    fit::ResidualProblem prob;
    prob.n_residuals = 2 * n;
    prob.residuals = [&, f_ref](std::span<const double> p, std::span<double> r) {
        const bool coupling = p.size() > 6;
        const double eta_g = coupling ? p[6] : 1.0;
        const double eta_e = coupling ? p[7] : 1.0;
        if (!(eta_g > 0.0) || !(eta_e > 0.0)) return false;
        // The delay is referenced to f_ref internally; theta0 = theta_ref + 2 pi f_ref tau.
        for (std::size_t i = 0; i < n; ++i) {
            const double delay = -two_pi * (f[i] - f_ref) * p[4] + p[5];
            r[i] = reflection_phase(f[i], f_ref + p[0], p[2], eta_g * p[2], 0.0, delay) - pg[i];
            r[n + i] = reflection_phase(f[i], f_ref + p[1], p[3], eta_e * p[3], 0.0, delay) - pe[i];
        }
        return true;
    };
    FitResult res = fit::lm_fit(prob, specs, options.lm);

    if (options.fit_coupling) {
        // The phase response depends on the two widths |kappa/2 - kappa_c|
        // and kappa/2 symmetrically, so eta = 1 (equal widths) is a
        // stationary point that the bounded transform cannot leave once it
        // saturates there. Refine the critically-coupled solution from a
        // few under-unity starts per trace and keep the best.
        constexpr std::array<double, 3> starts{0.9, 0.75, 0.6};
        std::optional<FitResult> best;
        std::optional<Error> failure;
        for (const double eta_g0 : starts) {
            for (const double eta_e0 : starts) {
                std::vector<fit::ParamSpec> refined = specs;
                for (std::size_t q = 0; q < refined.size(); ++q) {
                    refined[q].initial = res.values[static_cast<Eigen::Index>(q)];
                }
                refined.push_back({"eta_g", eta_g0, fit::Transform::bounded(0.0, 1.0)});
                refined.push_back({"eta_e", eta_e0, fit::Transform::bounded(0.0, 1.0)});
                try {
                    FitResult candidate = fit::lm_fit(prob, refined, options.lm);
                    if (!best || candidate.residual_norm < best->residual_norm) best = std::move(candidate);
                } catch (const Error& e) {
                    if (!is_numerical_failure(e.code())) throw;
                    failure = e;
                }
            }
        }
        if (!best) throw *failure;
        res = std::move(*best);
    }

    // Re-express the phase offset at f = 0: linear map on (tau, theta_ref).
    const auto it = static_cast<Eigen::Index>(res.index("tau_delay"));
    const auto ith = static_cast<Eigen::Index>(res.index("theta_ref"));
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(res.values.size(), res.values.size());
    m(ith, it) = two_pi * f_ref;
    res.values = m * res.values;
    res.values[static_cast<Eigen::Index>(res.index("f_g"))] += f_ref;
    res.values[static_cast<Eigen::Index>(res.index("f_e"))] += f_ref;
    res.covariance = m * res.covariance * m.transpose();
    res.sigmas = res.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    res.names[static_cast<std::size_t>(ith)] = "theta0";

    const double fg = res.value("f_g");
    const double fe = res.value("f_e");
    const auto ig = static_cast<Eigen::Index>(res.index("f_g"));
    const auto ie = static_cast<Eigen::Index>(res.index("f_e"));
    const double var_chi = res.covariance(ig, ig) + res.covariance(ie, ie) - 2.0 * res.covariance(ig, ie);
    res.add_derived("chi", two_pi * (fe - fg), two_pi * std::sqrt(std::max(var_chi, 0.0)));

    const auto ikg = static_cast<Eigen::Index>(res.index("kappa_g"));
    const auto ike = static_cast<Eigen::Index>(res.index("kappa_e"));
    const double var_k = 0.25 * (res.covariance(ikg, ikg) + res.covariance(ike, ike) + 2.0 * res.covariance(ikg, ike));
    const double kappa_mean = 0.5 * (res.value("kappa_g") + res.value("kappa_e"));
    res.add_derived("kappa_mean", kappa_mean, std::sqrt(std::max(var_k, 0.0)));

    const double half_band = 1.5 * std::max(res.value("kappa_g"), res.value("kappa_e")) / two_pi;
    if (f.front() > std::min(fg, fe) - half_band || f.back() < std::max(fg, fe) + half_band) {
        throw Error(Errc::SpanTooNarrow, "frequency sweep must extend 1.5 linewidths beyond both resonances");
    }
    return res;
}

ChiExtrapolation extrapolate_chi(std::span<const ChiPoint> points) {
    if (points.size() < 2) throw Error(Errc::InsufficientData, "chi extrapolation needs at least two points");
    std::vector<ChiPoint> pts(points.begin(), points.end());
    for (const auto& p : pts) {
        if (!(p.n_bar >= 0.0) || !std::isfinite(p.n_bar) || !std::isfinite(p.chi)) {
            throw Error(Errc::InvalidArgument, "chi points need finite chi and n_bar >= 0");
        }
    }
    std::sort(pts.begin(), pts.end(), [](const ChiPoint& a, const ChiPoint& b) { return a.n_bar < b.n_bar; });

    ChiExtrapolation out;
    fit::ResidualProblem prob;
    prob.n_residuals = pts.size();
    if (pts.size() <= 3) {
        out.linear_fallback = true;
        const double slope0 = (pts.back().chi - pts.front().chi) /
                              std::max(pts.back().n_bar - pts.front().n_bar, 1e-300);
        const std::vector<fit::ParamSpec> specs = {
            {"chi0", pts.front().chi - slope0 * pts.front().n_bar, fit::Transform::free()},
            {"slope", slope0, fit::Transform::free()},
        };
        prob.residuals = [pts](std::span<const double> p, std::span<double> r) {
            for (std::size_t i = 0; i < pts.size(); ++i) r[i] = p[0] + p[1] * pts[i].n_bar - pts[i].chi;
            return true;
        };
        out.fit = fit::lm_fit(prob, specs);
    } else {
        double mean_n = 0.0;
        for (const auto& p : pts) mean_n += p.n_bar;
        mean_n /= static_cast<double>(pts.size());
        const std::vector<fit::ParamSpec> specs = {
            {"chi0", pts.front().chi, fit::Transform::free()},
            {"a", pts.back().chi - pts.front().chi, fit::Transform::free()},
            {"n_c", std::max(mean_n, 1e-6), fit::Transform::positive()},
        };
        prob.residuals = [pts](std::span<const double> p, std::span<double> r) {
            for (std::size_t i = 0; i < pts.size(); ++i) {
                r[i] = p[0] + p[1] * -std::expm1(-pts[i].n_bar / p[2]) - pts[i].chi;
            }
            return true;
        };
        out.fit = fit::lm_fit(prob, specs);
    }
    out.chi0 = out.fit.value("chi0");
    out.sigma = out.fit.sigma("chi0");
    return out;
}

}  // namespace linetherm::resonator
