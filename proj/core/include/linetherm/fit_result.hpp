#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace linetherm {

/// Outcome of a damped least-squares fit.
///
/// Parameter estimates are reported in external (physical) units. The
/// covariance is symmetric PSD; `sigmas` are the square roots of its
/// diagonal. Parameters that the data do not constrain are reported with
/// a very large but finite sigma and set `rank_deficient`.
struct FitResult {
    std::vector<std::string> names;
    Eigen::VectorXd values;
    Eigen::VectorXd sigmas;
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;   // sqrt(sum r^2) of the weighted residuals
    std::size_t n_residuals = 0;
    std::size_t n_iterations = 0;
    bool converged = false;
    bool rank_deficient = false;
    std::string status;
    std::vector<double> cost_history;  // cost after every accepted step, starting with the initial point
    std::vector<std::string> warnings;

    std::size_t index(std::string_view name) const;
    bool contains(std::string_view name) const noexcept;
    double value(std::string_view name) const { return values[static_cast<Eigen::Index>(index(name))]; }
    double sigma(std::string_view name) const { return sigmas[static_cast<Eigen::Index>(index(name))]; }

    /// Appends a derived quantity whose variance was propagated by the caller.
    void add_derived(std::string name, double value, double sigma);
    std::vector<std::string> derived_names;
    std::vector<double> derived_values;
    std::vector<double> derived_sigmas;
    double derived(std::string_view name) const;
};

}  // namespace linetherm
