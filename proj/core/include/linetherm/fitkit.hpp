#pragma once

#include "linetherm/fit_result.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace linetherm::fit {

/// Maps an unconstrained internal coordinate onto the physical parameter.
class Transform {
public:
    enum class Kind { Free, Positive, Bounded };

    static Transform free() { return Transform(Kind::Free, 0.0, 0.0); }
    /// log-transform: external = exp(internal)
    static Transform positive() { return Transform(Kind::Positive, 0.0, 0.0); }
    /// external = lo + (hi - lo) * (1 + tanh(internal)) / 2
    static Transform bounded(double lo, double hi) { return Transform(Kind::Bounded, lo, hi); }

    Kind kind() const noexcept { return kind_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    double to_external(double internal) const noexcept;
    double to_internal(double external) const;
    /// d external / d internal
    double derivative(double internal) const noexcept;

private:
    Transform(Kind k, double lo, double hi) : kind_(k), lo_(lo), hi_(hi) {}
    Kind kind_;
    double lo_;
    double hi_;
};

struct ParamSpec {
    std::string name;
    double initial = 0.0;
    Transform transform = Transform::free();
    bool shared = false;

    void validate() const;
};

/// Writes residuals for the given external parameter vector. Returning
/// false marks the point as not evaluable.
using ResidualFn = std::function<bool(std::span<const double> params, std::span<double> residuals)>;

struct ResidualProblem {
    std::size_t n_residuals = 0;
    ResidualFn residuals;
    /// Optional per-point 1/sigma; empty means unweighted.
    std::vector<double> weights;

    void validate() const;
};

struct LmOptions {
    double lambda_initial = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 10.0;
    double cost_tolerance = 1e-10;  // relative cost change
    double step_tolerance = 1e-10;  // relative step in internal coordinates
    std::size_t max_iterations = 200;
    /// When false, non-convergence and singular Jacobians are reported in
    /// the result instead of thrown.
    bool throw_on_failure = true;
};

/// Parameters of one dataset inside a joint fit. `parameters` lists the
/// model's parameter names in the order the residual function expects;
/// each must name either a shared spec or one of `local`.
struct Dataset {
    ResidualProblem problem;
    std::vector<std::string> parameters;
    std::vector<ParamSpec> local;
};

/// Levenberg-Marquardt with Marquardt diagonal scaling and central
/// difference Jacobians in transformed coordinates.
FitResult lm_fit(const ResidualProblem& problem, std::span<const ParamSpec> specs,
                 const LmOptions& options = {});

/// Fits several datasets at once. Shared parameters get one estimate;
/// local parameters are reported as `name[k]` (k = dataset index) when
/// more than one dataset is supplied. The total cost is the sum of the
/// dataset costs.
FitResult joint_fit(std::span<const Dataset> datasets, std::span<const ParamSpec> shared,
                    const LmOptions& options = {});

/// Central-difference Jacobian of the weighted residuals with respect to
/// the internal coordinates, using step max(1e-6 |p|, 1e-9).
Eigen::MatrixXd numeric_jacobian(const ResidualProblem& problem, std::span<const ParamSpec> specs,
                                 std::span<const double> internal);

}  // namespace linetherm::fit
