#pragma once

#include "linetherm/types.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace linetherm::fin {

/// Thermal model of a stripline section clamped over length L_c: R_s is
/// the total resistance along the strip, R_t the total resistance through
/// the contact layer to the clamp held at T_d. Heat P enters on the heater
/// side, which sits d_hc in front of the clamp; the far end is insulated.
struct FinParams {
    double r_s = 0.0;    // K/W
    double r_t = 0.0;    // K/W, may be +inf only when p_heat == 0
    double l_c = 0.0;    // m
    double d_hc = 0.0;   // m
    double t_d = 0.0;    // K
    double p_heat = 0.0; // W

    /// sqrt(R_s / R_t)
    double shape() const noexcept;
    /// sqrt(R_s R_t)
    double magnitude() const noexcept;

    void validate() const;

    /// Builds (R_s, R_t) from shape u and magnitude g: R_s = u g, R_t = g / u.
    static FinParams from_shape(double u, double g, double l_c, double d_hc, double t_d, double p_heat);
};

struct DiscreteSolution {
    std::vector<double> positions;  // site centres (m)
    std::vector<double> profile;    // K
    double t_h = 0.0;               // K, heater-side thermometer
    double t_o = 0.0;               // K, far-side thermometer
};

/// Solves the n-site heat balance
///   (T_{i-1} - T_i)/(R_s/n) = (T_i - T_{i+1})/(R_s/n) + (T_i - T_d)/(R_t n)
/// with P injected into site 0 and no flow out of site n-1. Sites are
/// cell centres x_i = (i + 1/2) L_c / n; the end temperatures add the
/// half-cell drop so that they refer to x = 0 and x = L_c.
DiscreteSolution solve_discrete(const FinParams& p, std::size_t n);

/// Continuum profile T(x) = T_d + P sqrt(R_s R_t) cosh(u (1 - x/L_c)) / sinh(u).
double analytic_profile(const FinParams& p, double x);

struct Slopes {
    double slope_h = 0.0;  // (T_h - T_d)/P, K/W
    double slope_o = 0.0;  // (T_o - T_d)/P, K/W
};

/// slope_o = g / sinh(u); slope_h = g / tanh(u) + (d_hc / L_c) R_s.
Slopes predicted_diffs(const FinParams& p);

/// f(u) = cosh(u) + d_over_l u sinh(u); monotonically increasing for d_over_l >= 0.
double ratio_function(double u, double d_over_l);

/// Inverse of ratio_function. Throws RatioBelowOne for ratio < 1.
double invert_ratio(double ratio, double d_over_l);

struct PowerPoint {
    double p = 0.0;   // W
    double dt = 0.0;  // K
};

/// Least-squares slope through the origin over points with P <= threshold.
double fit_origin_slope(std::span<const PowerPoint> points, double threshold);

struct FinExtraction {
    double u = 0.0;        // sqrt(R_s/R_t)
    double g = 0.0;        // sqrt(R_s R_t), K/W
    double slope_h = 0.0;  // K/W
    double slope_o = 0.0;  // K/W
    double threshold = 0.0;

    double r_s() const noexcept { return u * g; }
    double r_t() const noexcept;
};

/// Fits the heater- and far-side slopes, inverts their ratio for u and
/// re-inserts u for g = slope_o sinh(u).
FinExtraction extract_resistances(const FinExperiment& exp, double threshold);

struct InversePoint {
    double t_d = 0.0;  // K
    double g = 0.0;    // K/W
};

/// Least-squares c in g = c / T_d (K^2/W).
double fit_inverse_t(std::span<const InversePoint> points);

}  // namespace linetherm::fin
