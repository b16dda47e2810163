#include "linetherm/fin.hpp"

#include "linetherm/error.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace linetherm::fin {

namespace {

constexpr double kSeriesCutoff = 1e-4;

/// u / sinh(u), exact limit 1 at u = 0.
double u_over_sinh(double u) {
    if (u < kSeriesCutoff) return 1.0 - u * u / 6.0;
    return u / std::sinh(u);
}

/// u / tanh(u), exact limit 1 at u = 0.
double u_over_tanh(double u) {
    if (u < kSeriesCutoff) return 1.0 + u * u / 3.0;
    return u / std::tanh(u);
}

}  // namespace

double FinParams::shape() const noexcept {
    if (std::isinf(r_t)) return 0.0;
    return std::sqrt(r_s / r_t);
}

double FinParams::magnitude() const noexcept { return std::sqrt(r_s * r_t); }

void FinParams::validate() const {
    if (!(r_s >= 0.0) || !std::isfinite(r_s)) throw Error(Errc::InvalidArgument, "R_s must be finite and >= 0");
    if (!(r_t > 0.0)) throw Error(Errc::InvalidArgument, "R_t must be > 0");
    if (!(l_c > 0.0) || !std::isfinite(l_c)) throw Error(Errc::InvalidArgument, "L_c must be > 0");
    if (!(d_hc >= 0.0) || !std::isfinite(d_hc)) throw Error(Errc::InvalidArgument, "d_hc must be >= 0");
    if (!(t_d > 0.0) || !std::isfinite(t_d)) throw Error(Errc::InvalidArgument, "T_d must be > 0");
    if (!(p_heat >= 0.0) || !std::isfinite(p_heat)) throw Error(Errc::InvalidArgument, "P_heat must be >= 0");
    if (std::isinf(r_t) && p_heat > 0.0) {
        throw Error(Errc::SingularSystem, "no contact to the clamp (R_t = inf): no steady state under heating");
    }
}

FinParams FinParams::from_shape(double u, double g, double l_c, double d_hc, double t_d, double p_heat) {
    if (!(u > 0.0) || !(g > 0.0)) throw Error(Errc::InvalidArgument, "shape and magnitude must be > 0");
    FinParams p{u * g, g / u, l_c, d_hc, t_d, p_heat};
    p.validate();
    return p;
}

double FinExtraction::r_t() const noexcept {
    return u > 0.0 ? g / u : std::numeric_limits<double>::quiet_NaN();
}

DiscreteSolution solve_discrete(const FinParams& p, std::size_t n) {
    p.validate();
    if (n < 2) throw Error(Errc::InvalidArgument, "solve_discrete needs n >= 2");
    const double nn = static_cast<double>(n);

    DiscreteSolution out;
    out.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.positions[i] = (static_cast<double>(i) + 0.5) * p.l_c / nn;

    if (p.p_heat == 0.0) {
        out.profile.assign(n, p.t_d);
        out.t_h = out.t_o = p.t_d;
        return out;
    }

    // Unknowns are theta_i = T_i - T_d. Conductances: along-strip c = n/R_s,
    // to the clamp l = 1/(R_t n).
    const double leak = 1.0 / (p.r_t * nn);
    std::vector<double> theta(n);
    if (p.r_s == 0.0) {
        // Infinite along-strip conductance: all sites share one temperature.
        theta.assign(n, p.p_heat / (leak * nn));
    } else {
        // Thomas algorithm on the symmetric tridiagonal system. Each pivot
        // is written as (coupling to the next site) + excess, and only the
        // excess is propagated: it stays positive and is never formed by
        // subtracting nearly equal conductances, so a leak many orders of
        // magnitude below c is not lost.
        const double c = nn / p.r_s;
        std::vector<double> ratio(n), dp(n);
        double excess = leak;
        double carried = p.p_heat;
        for (std::size_t i = 0;; ++i) {
            const double pivot = (i + 1 < n ? c : 0.0) + excess;
            ratio[i] = c / pivot;
            dp[i] = carried / pivot;
            if (i + 1 == n) break;
            carried = c * dp[i];
            excess = leak + c * excess / (c + excess);
        }
        theta[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) theta[i] = dp[i] + ratio[i] * theta[i + 1];
    }

    out.profile.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.profile[i] = p.t_d + theta[i];
    // Half a cell of strip resistance separates site 0 from the clamp edge.
    const double edge = theta[0] + 0.5 * (p.r_s / nn) * p.p_heat;
    out.t_h = p.t_d + edge + (p.d_hc / p.l_c) * p.r_s * p.p_heat;
    out.t_o = p.t_d + theta[n - 1];
    return out;
}

double analytic_profile(const FinParams& p, double x) {
    p.validate();
    if (!(x >= 0.0 && x <= p.l_c)) throw Error(Errc::InvalidArgument, "x must lie in [0, L_c]");
    const double u = p.shape();
    // g / sinh(u) = R_t u / sinh(u)
    return p.t_d + p.p_heat * p.r_t * u_over_sinh(u) * std::cosh(u * (1.0 - x / p.l_c));
}

Slopes predicted_diffs(const FinParams& p) {
    p.validate();
    const double u = p.shape();
    return {p.r_t * u_over_tanh(u) + (p.d_hc / p.l_c) * p.r_s, p.r_t * u_over_sinh(u)};
}

double ratio_function(double u, double d_over_l) {
    if (!(u >= 0.0) || !(d_over_l >= 0.0)) throw Error(Errc::InvalidArgument, "ratio_function needs u, d/L >= 0");
    return std::cosh(u) + d_over_l * u * std::sinh(u);
}

double invert_ratio(double ratio, double d_over_l) {
    if (!(d_over_l >= 0.0) || !std::isfinite(d_over_l)) throw Error(Errc::InvalidArgument, "d/L must be >= 0");
    if (!std::isfinite(ratio)) throw Error(Errc::InvalidArgument, "ratio must be finite");
    if (ratio < 1.0) throw Error(Errc::RatioBelowOne, "temperature ratio below 1 (heater side colder than far side)");
    if (ratio == 1.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (ratio_function(hi, d_over_l) < ratio) {
        lo = hi;
        hi *= 2.0;
        if (hi > 700.0) throw Error(Errc::OutOfRange, "temperature ratio too large to invert");
    }
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (ratio_function(mid, d_over_l) < ratio) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double fit_origin_slope(std::span<const PowerPoint> points, double threshold) {
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& pt : points) {
        if (!std::isfinite(pt.p) || !std::isfinite(pt.dt)) throw Error(Errc::InvalidArgument, "non-finite point");
        if (pt.p <= threshold) {
            sxy += pt.p * pt.dt;
            sxx += pt.p * pt.p;
        }
    }
    if (!(sxx > 0.0)) {
        throw Error(Errc::NoPointsBelowThreshold, "no non-zero power at or below the threshold");
    }
    return sxy / sxx;
}

FinExtraction extract_resistances(const FinExperiment& exp, double threshold) {
    exp.validate();
    std::vector<PowerPoint> heater;
    std::vector<PowerPoint> far;
    std::set<double> powers;
    for (const auto& r : exp.records) {
        heater.push_back({r.p_heat, r.t_h - r.t_d});
        far.push_back({r.p_heat, r.t_o - r.t_d});
        if (r.p_heat <= threshold && r.p_heat > 0.0) powers.insert(r.p_heat);
    }
    if (powers.size() < 2) {
        throw Error(Errc::NoPointsBelowThreshold, "need records at >= 2 distinct powers below the threshold");
    }
    FinExtraction out;
    out.threshold = threshold;
    out.slope_h = fit_origin_slope(heater, threshold);
    out.slope_o = fit_origin_slope(far, threshold);
    if (!(out.slope_o > 0.0)) throw Error(Errc::UnphysicalRatio, "far-side slope must be > 0");
    const double ratio = out.slope_h / out.slope_o;
    if (ratio < 1.0 || (ratio == 1.0 && exp.d_hc > 0.0)) {
        throw Error(Errc::UnphysicalRatio, "heater/far slope ratio " + std::to_string(ratio) +
                                               " is not compatible with the clamp geometry");
    }
    out.u = invert_ratio(ratio, exp.d_hc / exp.l_c);
    out.g = out.slope_o * std::sinh(out.u);
    return out;
}

double fit_inverse_t(std::span<const InversePoint> points) {
    if (points.empty()) throw Error(Errc::InsufficientData, "inverse-temperature fit needs at least one point");
    double num = 0.0;
    double den = 0.0;
    for (const auto& pt : points) {
        if (!(pt.t_d > 0.0)) throw Error(Errc::InvalidArgument, "T_d must be > 0");
        const double x = 1.0 / pt.t_d;
        num += pt.g * x;
        den += x * x;
    }
    return num / den;
}

}  // namespace linetherm::fin
