#include "linetherm/iqtemp.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"
#include "linetherm/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace linetherm::iq {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // ln(2 pi)

struct Component {
    Eigen::Vector2d mean;
    Eigen::Matrix2d inv;
    double log_norm;  // ln(w) - ln(2 pi) - ln(det)/2
};

Component prepare(double weight, const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov) {
    const double det = cov.determinant();
    return {mean, cov.inverse(), std::log(weight) - kLog2Pi - 0.5 * std::log(det)};
}

double log_component(const Component& c, const Eigen::Vector2d& x) {
    const Eigen::Vector2d d = x - c.mean;
    return c.log_norm - 0.5 * d.dot(c.inv * d);
}

double log_add(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

Eigen::Vector2d vec(const IQPoint& p) { return {p[0], p[1]}; }

/// K-means++ seeding followed by Lloyd iterations; returns hard labels.
std::vector<int> kmeans_labels(const IQCloud& cloud, std::uint64_t seed, std::size_t iterations) {
    Stream rng(seed, "iq.kmeans");
    const auto& pts = cloud.points;
    const std::size_t n = pts.size();
    std::array<Eigen::Vector2d, 2> centre;
    centre[0] = vec(pts[rng.below(n)]);
    std::vector<double> d2(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = (vec(pts[i]) - centre[0]).squaredNorm();
        total += d2[i];
    }
    if (!(total > 0.0)) throw Error(Errc::DegenerateCovariance, "all IQ points coincide");
    double target = rng.uniform() * total;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
            pick = i;
            break;
        }
    }
    centre[1] = vec(pts[pick]);

    std::vector<int> label(n, 0);
    for (std::size_t it = 0; it < iterations; ++it) {
        bool changed = false;
        std::array<Eigen::Vector2d, 2> sum{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
        std::array<double, 2> count{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d x = vec(pts[i]);
            const int l = (x - centre[0]).squaredNorm() <= (x - centre[1]).squaredNorm() ? 0 : 1;
            if (l != label[i]) changed = true;
            label[i] = l;
            sum[static_cast<std::size_t>(l)] += x;
            count[static_cast<std::size_t>(l)] += 1.0;
        }
        for (std::size_t k = 0; k < 2; ++k) {
            if (count[k] > 0.0) centre[k] = sum[k] / count[k];
        }
        if (!changed && it > 0) break;
    }
    return label;
}

void check_covariance(const Eigen::Matrix2d& cov, double scale) {
    const double det = cov.determinant();
    if (!(det > 1e-12 * scale * scale) || !(cov(0, 0) > 0.0) || !std::isfinite(det)) {
        throw Error(Errc::DegenerateCovariance, "mixture component collapsed");
    }
}

}  // namespace

void MixtureModel::validate() const {
    for (std::size_t k = 0; k < 2; ++k) {
        if (!(weights[k] > 0.0 && weights[k] < 1.0)) throw Error(Errc::InvalidArgument, "weights must lie in (0, 1)");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(covariances[k]);
        if (!(eig.eigenvalues().minCoeff() > 0.0)) {
            throw Error(Errc::InvalidArgument, "covariance must be positive definite");
        }
    }
    if (std::abs(weights[0] + weights[1] - 1.0) > 1e-12) throw Error(Errc::InvalidArgument, "weights must sum to 1");
}

double MixtureModel::log_density(const IQPoint& point) const {
    const Eigen::Vector2d x = vec(point);
    const Component c0 = prepare(weights[0], means[0], covariances[0]);
    const Component c1 = prepare(weights[1], means[1], covariances[1]);
    return log_add(log_component(c0, x), log_component(c1, x));
}

MixtureFit fit_mixture(const IQCloud& cloud, std::uint64_t seed, const MixtureOptions& options) {
    cloud.validate();
    const std::size_t n = cloud.n_points();
    if (n < 4) throw Error(Errc::InsufficientData, "mixture fit needs at least 4 points");
    const double nn = static_cast<double>(n);

    // Single-Gaussian reference (also sets the covariance scale).
    Eigen::Vector2d mean_all = Eigen::Vector2d::Zero();
    for (const auto& p : cloud.points) mean_all += vec(p);
    mean_all /= nn;
    Eigen::Matrix2d cov_all = Eigen::Matrix2d::Zero();
    for (const auto& p : cloud.points) {
        const Eigen::Vector2d d = vec(p) - mean_all;
        cov_all += d * d.transpose();
    }
    cov_all /= nn;
    const double scale = cov_all.trace();
    if (!(cov_all.determinant() > 1e-12 * scale * scale)) {
        throw Error(Errc::DegenerateCovariance, "IQ cloud has no two-dimensional spread");
    }

    // Initial parameters from the hard k-means partition.
    const std::vector<int> label = kmeans_labels(cloud, seed, options.kmeans_iterations);
    std::array<double, 2> w{};
    std::array<Eigen::Vector2d, 2> mu{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
    std::array<Eigen::Matrix2d, 2> cov{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(label[i]);
        w[k] += 1.0;
        mu[k] += vec(cloud.points[i]);
    }
    for (std::size_t k = 0; k < 2; ++k) {
        if (w[k] < 2.0) throw Error(Errc::DegenerateCovariance, "k-means left a component (nearly) empty");
        mu[k] /= w[k];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(label[i]);
        const Eigen::Vector2d d = vec(cloud.points[i]) - mu[k];
        cov[k] += d * d.transpose();
    }
    for (std::size_t k = 0; k < 2; ++k) {
        cov[k] /= w[k];
        cov[k] += 1e-9 * scale * Eigen::Matrix2d::Identity();
        w[k] /= nn;
    }

    MixtureFit out;
    std::vector<double> resp(n);  // responsibility of component 1
    double previous = -std::numeric_limits<double>::infinity();
    bool converged = false;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        for (std::size_t k = 0; k < 2; ++k) check_covariance(cov[k], scale);
        const Component c0 = prepare(w[0], mu[0], cov[0]);
        const Component c1 = prepare(w[1], mu[1], cov[1]);

        // E step
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d x = vec(cloud.points[i]);
            const double l0 = log_component(c0, x);
            const double l1 = log_component(c1, x);
            const double lt = log_add(l0, l1);
            ll += lt;
            resp[i] = std::exp(l1 - lt);
        }
        out.log_likelihood.push_back(ll);
        out.iterations = it + 1;
        if (std::abs(ll - previous) <= options.tolerance * std::abs(ll)) {
            converged = true;
            break;
        }
        previous = ll;

        // M step
        std::array<double, 2> nk{0.0, 0.0};
        std::array<Eigen::Vector2d, 2> sum{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d x = vec(cloud.points[i]);
            nk[0] += 1.0 - resp[i];
            nk[1] += resp[i];
            sum[0] += (1.0 - resp[i]) * x;
            sum[1] += resp[i] * x;
        }
        if (!(nk[0] > 1.0) || !(nk[1] > 1.0)) throw Error(Errc::DegenerateCovariance, "mixture component emptied");
        for (std::size_t k = 0; k < 2; ++k) mu[k] = sum[k] / nk[k];
        std::array<Eigen::Matrix2d, 2> sq{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d x = vec(cloud.points[i]);
            const Eigen::Vector2d d0 = x - mu[0];
            const Eigen::Vector2d d1 = x - mu[1];
            sq[0] += (1.0 - resp[i]) * (d0 * d0.transpose());
            sq[1] += resp[i] * (d1 * d1.transpose());
        }
        for (std::size_t k = 0; k < 2; ++k) {
            cov[k] = sq[k] / nk[k];
            w[k] = nk[k] / nn;
        }
    }
    // Maximum-likelihood single Gaussian in two dimensions.
    const double ll_single = -0.5 * nn * (2.0 * kLog2Pi + std::log(cov_all.determinant()) + 2.0);
    const double bic_gain = 2.0 * (out.log_likelihood.back() - ll_single) - 6.0 * std::log(nn);
    if (!converged) {
        // A one-Gaussian cloud makes the split unidentifiable: EM then drifts
        // along a flat likelihood ridge instead of converging.
        if (!(bic_gain > 0.0)) {
            throw Error(Errc::DegenerateCovariance,
                        "two-component mixture not identifiable: the cloud is consistent with one Gaussian");
        }
        throw Error(Errc::NonConvergence,
                    "EM did not converge in " + std::to_string(options.max_iterations) + " iterations");
    }

    // Labelling: ground state is the heavier component, or the one closest
    // to the supplied reference.
    std::size_t ground = w[0] >= w[1] ? 0 : 1;
    if (options.ground_reference) {
        const Eigen::Vector2d ref = vec(*options.ground_reference);
        ground = (mu[0] - ref).squaredNorm() <= (mu[1] - ref).squaredNorm() ? 0 : 1;
    }
    const std::size_t excited = 1 - ground;
    out.model.weights = {w[ground], w[excited]};
    out.model.means = {mu[ground], mu[excited]};
    out.model.covariances = {cov[ground], cov[excited]};

    const Eigen::Vector2d dm = mu[0] - mu[1];
    const Eigen::Matrix2d avg = 0.5 * (cov[0] + cov[1]);
    out.separation = std::sqrt(dm.dot(avg.inverse() * dm));
    out.bic_gain = bic_gain;
    out.well_separated = out.bic_gain > 0.0;
    return out;
}

double temperature_from_populations(double p_e, double p_g, double f_q) {
    if (!(p_e > 0.0) || !(p_g > 0.0) || !std::isfinite(p_e) || !std::isfinite(p_g)) {
        throw Error(Errc::InvalidArgument, "populations must be > 0");
    }
    if (!(f_q > 0.0) || !std::isfinite(f_q)) throw Error(Errc::InvalidArgument, "f_q must be > 0");
    if (p_e >= p_g) {
        throw Error(Errc::InvertedPopulation, "excited population >= ground population: no positive temperature");
    }
    return photon_temperature(f_q) / std::log(p_g / p_e);
}

double measurement_photons(double n_bar, double kappa, double t_meas) {
    if (!(n_bar >= 0.0) || !(kappa >= 0.0) || !(t_meas >= 0.0)) {
        throw Error(Errc::InvalidArgument, "measurement photons need non-negative inputs");
    }
    return n_bar * kappa * t_meas / 4.0;
}

SweepResult sweep_temperature(std::span<const IQCloud> clouds, std::uint64_t seed, const MixtureOptions& options) {
    SweepResult out;
    for (std::size_t k = 0; k < clouds.size(); ++k) {
        const auto fit = fit_mixture(clouds[k], seed + k, options);
        try {
            const double t = temperature_from_populations(fit.model.p_e(), fit.model.p_g(), clouds[k].f_q);
            out.points.push_back({k, clouds[k].f_q, t, fit.model.p_g(), fit.model.p_e()});
        } catch (const Error& e) {
            if (e.code() != Errc::InvertedPopulation) throw;
            out.excluded.push_back({k, clouds[k].f_q, e.what()});
        }
    }
    if (out.points.empty()) throw Error(Errc::AllExcluded, "every cloud was excluded from the sweep");
    double sum = 0.0;
    for (const auto& p : out.points) sum += p.t_q;
    out.mean = sum / static_cast<double>(out.points.size());
    double ss = 0.0;
    for (const auto& p : out.points) ss += (p.t_q - out.mean) * (p.t_q - out.mean);
    out.sigma = std::sqrt(ss / static_cast<double>(out.points.size()));
    return out;
}

}  // namespace linetherm::iq
