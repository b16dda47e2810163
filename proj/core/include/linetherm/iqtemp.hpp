#pragma once

#include "linetherm/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace linetherm::iq {

/// Two-component Gaussian mixture; component 0 is the ground pointer
/// state, component 1 the excited one.
struct MixtureModel {
    std::array<double, 2> weights{0.5, 0.5};
    std::array<Eigen::Vector2d, 2> means{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
    std::array<Eigen::Matrix2d, 2> covariances{Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity()};

    double p_g() const noexcept { return weights[0]; }
    double p_e() const noexcept { return weights[1]; }
    void validate() const;
    /// Log of the mixture density at one point.
    double log_density(const IQPoint& point) const;
};

struct MixtureOptions {
    std::size_t max_iterations = 1000;
    double tolerance = 1e-10;  // relative log-likelihood change
    std::size_t kmeans_iterations = 25;
    /// Label the component whose mean is closest to this point as ground,
    /// instead of the one with larger weight.
    std::optional<IQPoint> ground_reference;
};

struct MixtureFit {
    MixtureModel model;
    std::vector<double> log_likelihood;  // total log-likelihood per EM iteration
    std::size_t iterations = 0;
    /// Mahalanobis distance between the two means under the mean covariance.
    double separation = 0.0;
    /// 2 (LL_mixture - LL_single) - 6 ln N; positive when the data support two components.
    double bic_gain = 0.0;
    bool well_separated = false;
};

/// K-means++ seeded expectation-maximization with full covariances.
/// Throws DegenerateCovariance when a component collapses or when EM runs
/// out of iterations on a cloud that one Gaussian describes at least as
/// well (unidentifiable split), and NonConvergence when max_iterations is
/// otherwise exhausted.
MixtureFit fit_mixture(const IQCloud& cloud, std::uint64_t seed, const MixtureOptions& options = {});

/// Two-level Boltzmann temperature T = (h f_q / k_B) / ln(p_g / p_e).
/// Throws InvertedPopulation when p_e >= p_g.
double temperature_from_populations(double p_e, double p_g, double f_q);

/// Readout photons per measurement, n kappa t_meas / 4.
double measurement_photons(double n_bar, double kappa, double t_meas);

struct SweepPoint {
    std::size_t index = 0;
    double f_q = 0.0;
    double t_q = 0.0;
    double p_g = 0.0;
    double p_e = 0.0;
};

struct SweepExclusion {
    std::size_t index = 0;
    double f_q = 0.0;
    std::string reason;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<SweepExclusion> excluded;
    double mean = 0.0;   // K
    double sigma = 0.0;  // K, population standard deviation
};

/// Fits every cloud (cloud k uses seed + k) and converts populations to
/// temperatures. Clouds with inverted populations are listed as excluded;
/// throws AllExcluded when nothing remains.
SweepResult sweep_temperature(std::span<const IQCloud> clouds, std::uint64_t seed,
                              const MixtureOptions& options = {});

}  // namespace linetherm::iq
