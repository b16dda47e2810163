#include "linetherm/heatpulse.hpp"

#include "linetherm/error.hpp"
#include "linetherm/shotnoise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace linetherm::heatpulse {

void HeatPulseModelParams::validate() const {
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw Error(Errc::InvalidArgument, "T0 must be > 0");
    if (!(delta_t >= 0.0) || !std::isfinite(delta_t)) throw Error(Errc::InvalidArgument, "Delta T must be >= 0");
    if (!(tau_cool > 0.0) || !std::isfinite(tau_cool)) throw Error(Errc::InvalidArgument, "tau_cool must be > 0");
    if (!std::isfinite(gamma_offset) || !std::isfinite(f0_offset)) {
        throw Error(Errc::InvalidArgument, "offsets must be finite");
    }
}

double temperature_at(const HeatPulseModelParams& params, double t_cool) {
    params.validate();
    if (!(t_cool >= 0.0)) throw Error(Errc::InvalidArgument, "t_cool must be >= 0");
    return params.t0 + params.delta_t * std::exp(-t_cool / params.tau_cool);
}

TrajectoryPoint trajectory(const HeatPulseModelParams& params, const SystemParams& sys, double t_cool) {
    params.validate();
    const double n_bar = shotnoise::bose_einstein(temperature_at(params, t_cool), sys.f_r);
    const auto pt = shotnoise::dephasing_full(n_bar, sys);
    return {pt.gamma_n, pt.delta_f_stark};
}

OffsetCalibration calibrate_offset(std::span<const double> gamma2_star_tail, double gamma_n_baseline) {
    if (gamma2_star_tail.empty()) throw Error(Errc::InsufficientData, "offset calibration needs tail samples");
    const double mean = std::accumulate(gamma2_star_tail.begin(), gamma2_star_tail.end(), 0.0) /
                        static_cast<double>(gamma2_star_tail.size());
    return {mean - gamma_n_baseline, gamma2_star_tail.size(), gamma2_star_tail.size() == 1};
}

namespace {

double rms_spread(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double spread = std::sqrt(ss / static_cast<double>(v.size()));
    if (spread > 0.0) return spread;
    double sa = 0.0;
    for (double x : v) sa += x * x;
    const double rms = std::sqrt(sa / static_cast<double>(v.size()));
    return rms > 0.0 ? rms : 1.0;
}

/// Rough 1/e time of the rate excess in the dataset with the largest
/// initial excess.
double estimate_tau(std::span<const HeatPulseSeries> datasets, double baseline, double gamma_offset) {
    const HeatPulseSeries* best = nullptr;
    double best_excess = 0.0;
    for (const auto& ds : datasets) {
        const double excess = ds.samples.front().gamma2_star - gamma_offset - baseline;
        if (excess > best_excess) {
            best_excess = excess;
            best = &ds;
        }
    }
    if (best == nullptr) {
        const auto& s = datasets.front().samples;
        return std::max(0.2 * (s.back().t_cool - s.front().t_cool), 1e-9);
    }
    const auto& s = best->samples;
    const double threshold = best_excess * std::exp(-1.0);
    for (const auto& p : s) {
        if (p.gamma2_star - gamma_offset - baseline < threshold) {
            return std::max(p.t_cool - s.front().t_cool, 1e-9);
        }
    }
    return std::max(0.2 * (s.back().t_cool - s.front().t_cool), 1e-9);
}

}  // namespace

FitResult fit_cooling(std::span<const HeatPulseSeries> datasets, const SystemParams& sys, double t0,
                      const CoolingOptions& options) {
    sys.validate();
    if (!(t0 > 0.0)) throw Error(Errc::InvalidArgument, "T0 must be > 0");
    if (datasets.empty()) throw Error(Errc::InsufficientData, "no heat-pulse datasets");
    for (const auto& ds : datasets) {
        ds.validate();
        if (ds.samples.size() < 4) throw Error(Errc::InsufficientData, "each heat-pulse dataset needs >= 4 points");
    }
    if (options.sigma_gamma && !(*options.sigma_gamma > 0.0)) {
        throw Error(Errc::InvalidArgument, "sigma_gamma must be > 0");
    }
    if (options.sigma_f && !(*options.sigma_f > 0.0)) throw Error(Errc::InvalidArgument, "sigma_f must be > 0");

    const HeatPulseModelParams base{t0, 0.0, 1.0, 0.0, 0.0};
    const TrajectoryPoint baseline = trajectory(base, sys, 0.0);
    const double tau0 = options.tau_initial.value_or(estimate_tau(datasets, baseline.gamma_n, options.gamma_offset));

    // f0_offset starts from the long-t_cool mean of the frequency data.
    std::vector<double> tail_f;
    for (const auto& ds : datasets) {
        const std::size_t n = ds.samples.size();
        for (std::size_t i = n - std::max<std::size_t>(1, n / 5); i < n; ++i) tail_f.push_back(ds.samples[i].delta_f);
    }
    const double f0_init = std::accumulate(tail_f.begin(), tail_f.end(), 0.0) / static_cast<double>(tail_f.size()) -
                           baseline.delta_f;

    std::vector<fit::ParamSpec> shared = {
        {"tau_cool", tau0, fit::Transform::positive(), true},
        {"f0_offset", f0_init, fit::Transform::free(), true},
    };
    if (options.fit_t0) shared.push_back({"T0", t0, fit::Transform::positive(), true});

    std::vector<fit::Dataset> problems;
    problems.reserve(datasets.size());
    for (const auto& ds : datasets) {
        const auto& s = ds.samples;
        const std::size_t n = s.size();

        // Delta T from the first sample, propagated back to t_cool = 0.
        double dt_init = 1e-3 * t0;
        const double g_first = s.front().gamma2_star - options.gamma_offset;
        if (g_first > baseline.gamma_n) {
            try {
                const double n_bar = shotnoise::photons_from_dephasing(g_first, sys);
                const double temp = shotnoise::temperature_from_photons(n_bar, sys.f_r);
                dt_init = std::max((temp - t0) * std::exp(s.front().t_cool / tau0), dt_init);
            } catch (const Error&) {
                // keep the small default
            }
        }

        std::vector<double> g_data(n), f_data(n), times(n);
        for (std::size_t i = 0; i < n; ++i) {
            times[i] = s[i].t_cool;
            g_data[i] = s[i].gamma2_star - options.gamma_offset;
            f_data[i] = s[i].delta_f;
        }
        const double w_g = 1.0 / options.sigma_gamma.value_or(rms_spread(g_data));
        const double w_f = 1.0 / options.sigma_f.value_or(rms_spread(f_data));

        fit::Dataset d;
        d.parameters = {"tau_cool", "f0_offset", "delta_T"};
        if (options.fit_t0) d.parameters.push_back("T0");
        d.local = {{"delta_T", dt_init, fit::Transform::positive()}};
        d.problem.n_residuals = 2 * n;
        if (options.sigma_gamma || options.sigma_f) {
            d.problem.weights.assign(2 * n, 1.0);
            std::fill(d.problem.weights.begin(), d.problem.weights.begin() + static_cast<std::ptrdiff_t>(n), w_g);
            std::fill(d.problem.weights.begin() + static_cast<std::ptrdiff_t>(n), d.problem.weights.end(), w_f);
        }
        const bool weighted = !d.problem.weights.empty();
        const bool fit_t0 = options.fit_t0;
        d.problem.residuals = [=, &sys](std::span<const double> p, std::span<double> r) {
            const HeatPulseModelParams m{fit_t0 ? p[3] : t0, p[2], p[0], 0.0, p[1]};
            for (std::size_t i = 0; i < n; ++i) {
                const double temp = m.t0 + m.delta_t * std::exp(-times[i] / m.tau_cool);
                const auto pt = shotnoise::dephasing_full(shotnoise::bose_einstein(temp, sys.f_r), sys);
                r[i] = pt.gamma_n - g_data[i];
                r[n + i] = pt.delta_f_stark + m.f0_offset - f_data[i];
                if (!weighted) {
                    r[i] *= w_g;
                    r[n + i] *= w_f;
                }
            }
            return true;
        };
        problems.push_back(std::move(d));
    }
    return fit::joint_fit(problems, shared, options.lm);
}

CoolingAnalysis analyze_cooling(std::span<const HeatPulseSeries> datasets, const SystemParams& sys, double t0,
                                double tail_start, std::optional<double> baseline, CoolingOptions options) {
    sys.validate();
    CoolingAnalysis out;
    out.baseline = baseline.value_or(trajectory({t0, 0.0, 1.0, 0.0, 0.0}, sys, 0.0).gamma_n);
    std::vector<double> tail;
    for (const auto& ds : datasets) {
        for (const auto& s : ds.samples) {
            if (s.t_cool >= tail_start) tail.push_back(s.gamma2_star);
        }
    }
    out.calibration = calibrate_offset(tail, out.baseline);
    options.gamma_offset = out.calibration.offset;
    out.fit = fit_cooling(datasets, sys, t0, options);
    if (out.calibration.low_confidence) {
        out.fit.warnings.push_back("offset calibrated from a single tail sample");
    }
    return out;
}

}  // namespace linetherm::heatpulse
