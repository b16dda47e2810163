#include "linetherm/fitkit.hpp"

#include "linetherm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace linetherm::fit {

double Transform::to_external(double internal) const noexcept {
    switch (kind_) {
        case Kind::Free: return internal;
        case Kind::Positive: return std::exp(internal);
        case Kind::Bounded: return lo_ + (hi_ - lo_) * 0.5 * (1.0 + std::tanh(internal));
    }
    return internal;
}

double Transform::to_internal(double external) const {
    switch (kind_) {
        case Kind::Free:
            return external;
        case Kind::Positive:
            if (!(external > 0.0)) throw Error(Errc::InvalidArgument, "positive parameter must be > 0");
            return std::log(external);
        case Kind::Bounded: {
            if (!(external > lo_ && external < hi_)) {
                throw Error(Errc::InvalidArgument, "bounded parameter outside (lo, hi)");
            }
            return std::atanh(2.0 * (external - lo_) / (hi_ - lo_) - 1.0);
        }
    }
    return external;
}

double Transform::derivative(double internal) const noexcept {
    switch (kind_) {
        case Kind::Free: return 1.0;
        case Kind::Positive: return std::exp(internal);
        case Kind::Bounded: {
            const double t = std::tanh(internal);
            return (hi_ - lo_) * 0.5 * (1.0 - t * t);
        }
    }
    return 1.0;
}

void ParamSpec::validate() const {
    if (name.empty()) throw Error(Errc::InvalidArgument, "ParamSpec: empty name");
    if (!std::isfinite(initial)) throw Error(Errc::InvalidArgument, "ParamSpec '" + name + "': non-finite initial value");
    switch (transform.kind()) {
        case Transform::Kind::Free:
            break;
        case Transform::Kind::Positive:
            if (!(initial > 0.0)) {
                throw Error(Errc::InvalidArgument, "ParamSpec '" + name + "': positive parameter needs initial > 0");
            }
            break;
        case Transform::Kind::Bounded:
            if (!(transform.lo() < transform.hi())) {
                throw Error(Errc::InvalidArgument, "ParamSpec '" + name + "': bounds require lo < hi");
            }
            if (!(initial > transform.lo() && initial < transform.hi())) {
                throw Error(Errc::InvalidArgument, "ParamSpec '" + name + "': initial value outside (lo, hi)");
            }
            break;
    }
}

void ResidualProblem::validate() const {
    if (n_residuals == 0) throw Error(Errc::InsufficientData, "ResidualProblem: no residuals");
    if (!residuals) throw Error(Errc::InvalidArgument, "ResidualProblem: missing residual function");
    if (!weights.empty()) {
        if (weights.size() != n_residuals) {
            throw Error(Errc::InvalidArgument, "ResidualProblem: weights length differs from residual count");
        }
        for (double w : weights) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw Error(Errc::InvalidArgument, "ResidualProblem: weights must be finite and > 0");
            }
        }
    }
}

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kLambdaMax = 1e16;

/// Flattened view of a joint problem: one global internal vector feeding
/// every dataset through an index map.
class Assembly {
public:
    Assembly(std::span<const Dataset> datasets, std::span<const ParamSpec> shared)
        : datasets_(datasets) {
        if (datasets.empty()) throw Error(Errc::InsufficientData, "joint_fit: no datasets");

        std::map<std::string, const ParamSpec*, std::less<>> shared_by_name;
        for (const auto& s : shared) {
            s.validate();
            if (!shared_by_name.emplace(s.name, &s).second) {
                throw Error(Errc::MismatchedSpec, "duplicate shared parameter '" + s.name + "'");
            }
        }

        std::map<std::string, std::size_t, std::less<>> shared_index;
        const bool suffix_locals = datasets.size() > 1;
        for (std::size_t k = 0; k < datasets.size(); ++k) {
            const auto& ds = datasets[k];
            ds.problem.validate();
            offsets_.push_back(n_residuals_);
            n_residuals_ += ds.problem.n_residuals;
            if (!ds.problem.weights.empty()) weighted_ = true;

            std::map<std::string, const ParamSpec*, std::less<>> local_by_name;
            for (const auto& l : ds.local) {
                l.validate();
                if (shared_by_name.contains(l.name) || !local_by_name.emplace(l.name, &l).second) {
                    throw Error(Errc::MismatchedSpec, "parameter '" + l.name + "' declared twice in dataset " +
                                                          std::to_string(k));
                }
            }
            for (const auto& [name, spec] : shared_by_name) {
                if (std::find(ds.parameters.begin(), ds.parameters.end(), name) == ds.parameters.end()) {
                    throw Error(Errc::MismatchedSpec,
                                "shared parameter '" + name + "' missing from dataset " + std::to_string(k));
                }
            }

            std::vector<std::size_t> map;
            for (const auto& name : ds.parameters) {
                if (auto it = shared_by_name.find(name); it != shared_by_name.end()) {
                    auto [pos, inserted] = shared_index.emplace(name, specs_.size());
                    if (inserted) {
                        specs_.push_back(*it->second);
                        names_.push_back(name);
                    }
                    map.push_back(pos->second);
                } else if (auto lt = local_by_name.find(name); lt != local_by_name.end()) {
                    map.push_back(specs_.size());
                    specs_.push_back(*lt->second);
                    names_.push_back(suffix_locals ? name + "[" + std::to_string(k) + "]" : name);
                } else {
                    throw Error(Errc::MismatchedSpec,
                                "dataset " + std::to_string(k) + " uses undeclared parameter '" + name + "'");
                }
            }
            maps_.push_back(std::move(map));
        }
        if (n_residuals_ < specs_.size()) {
            throw Error(Errc::InsufficientData, "fewer residuals than free parameters");
        }
        scratch_.resize(datasets.size());
        for (std::size_t k = 0; k < datasets.size(); ++k) scratch_[k].resize(maps_[k].size());
    }

    std::size_t n_params() const noexcept { return specs_.size(); }
    std::size_t n_residuals() const noexcept { return n_residuals_; }
    bool weighted() const noexcept { return weighted_; }
    const std::vector<ParamSpec>& specs() const noexcept { return specs_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    Eigen::VectorXd initial_internal() const {
        Eigen::VectorXd x(static_cast<Eigen::Index>(specs_.size()));
        for (std::size_t j = 0; j < specs_.size(); ++j) {
            x[static_cast<Eigen::Index>(j)] = specs_[j].transform.to_internal(specs_[j].initial);
        }
        return x;
    }

    Eigen::VectorXd external(const Eigen::VectorXd& x) const {
        Eigen::VectorXd p(x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            p[j] = specs_[static_cast<std::size_t>(j)].transform.to_external(x[j]);
        }
        return p;
    }

    /// Weighted residuals at internal point x; false if not evaluable.
    bool evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r) {
        r.resize(static_cast<Eigen::Index>(n_residuals_));
        const Eigen::VectorXd p = external(x);
        for (Eigen::Index j = 0; j < p.size(); ++j) {
            if (!std::isfinite(p[j])) return false;
        }
        for (std::size_t k = 0; k < datasets_.size(); ++k) {
            auto& buf = scratch_[k];
            for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = p[static_cast<Eigen::Index>(maps_[k][i])];
            const auto& prob = datasets_[k].problem;
            std::span<double> out(r.data() + offsets_[k], prob.n_residuals);
            if (!prob.residuals(std::span<const double>(buf), out)) return false;
            if (!prob.weights.empty()) {
                for (std::size_t i = 0; i < out.size(); ++i) out[i] *= prob.weights[i];
            }
        }
        return r.allFinite();
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& r0) {
        const auto m = static_cast<Eigen::Index>(n_residuals_);
        const auto n = x.size();
        Eigen::MatrixXd jac(m, n);
        Eigen::VectorXd rp, rm;
        Eigen::VectorXd xs = x;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double h = std::max(1e-6 * std::abs(x[j]), 1e-9);
            xs[j] = x[j] + h;
            const bool okp = evaluate(xs, rp);
            xs[j] = x[j] - h;
            const bool okm = evaluate(xs, rm);
            xs[j] = x[j];
            if (okp && okm) {
                jac.col(j) = (rp - rm) / (2.0 * h);
            } else if (okp) {
                jac.col(j) = (rp - r0) / h;
            } else if (okm) {
                jac.col(j) = (r0 - rm) / h;
            } else {
                throw Error(Errc::EvaluationFailure,
                            "residuals not evaluable around parameter '" + names_[static_cast<std::size_t>(j)] + "'");
            }
        }
        return jac;
    }

private:
    std::span<const Dataset> datasets_;
    std::vector<ParamSpec> specs_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::size_t>> maps_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<double>> scratch_;
    std::size_t n_residuals_ = 0;
    bool weighted_ = false;
};

struct Covariance {
    Eigen::MatrixXd internal;
    bool rank_deficient = false;
};

/// (J^T J)^-1 via eigen-decomposition; directions with eigenvalues below
/// kRankTolerance * max are clamped so that their variance is huge but finite.
Covariance invert_normal_matrix(const Eigen::MatrixXd& jac) {
    const Eigen::MatrixXd a = jac.transpose() * jac;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    Eigen::VectorXd ev = eig.eigenvalues();
    const double max_ev = ev.size() > 0 ? std::max(ev.maxCoeff(), 0.0) : 0.0;
    const double floor = max_ev > 0.0 ? kRankTolerance * max_ev : 1.0;
    Covariance out;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (!(ev[i] > floor)) {
            out.rank_deficient = true;
            ev[i] = floor;
        }
    }
    out.internal = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    out.internal = 0.5 * (out.internal + out.internal.transpose());
    return out;
}

FitResult run(Assembly& asmb, const LmOptions& opt) {
    FitResult res;
    res.names = asmb.names();
    res.n_residuals = asmb.n_residuals();

    Eigen::VectorXd x = asmb.initial_internal();
    Eigen::VectorXd r;
    if (!asmb.evaluate(x, r)) {
        throw Error(Errc::EvaluationFailure, "residuals not evaluable at the initial point");
    }
    double cost = r.squaredNorm();
    res.cost_history.push_back(cost);

    double lambda = opt.lambda_initial;
    bool converged = cost == 0.0;
    std::string status = converged ? "exact fit at initial point" : "";
    bool singular = false;
    std::size_t iter = 0;

    Eigen::VectorXd trial_r;
    while (!converged && iter < opt.max_iterations) {
        ++iter;
        const Eigen::MatrixXd jac = asmb.jacobian(x, r);
        const Eigen::MatrixXd a = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        Eigen::VectorXd d = a.diagonal();
        const double dmax = d.maxCoeff();
        if (!(dmax > 0.0)) {
            singular = true;
            status = "Jacobian is identically zero";
            break;
        }
        for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = std::max(d[j], kRankTolerance * dmax);

        bool accepted = false;
        while (lambda <= kLambdaMax) {
            Eigen::MatrixXd damped = a;
            damped.diagonal() += lambda * d;
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= opt.lambda_up;
                continue;
            }
            const Eigen::VectorXd xt = x + step;
            if (asmb.evaluate(xt, trial_r)) {
                const double trial_cost = trial_r.squaredNorm();
                if (trial_cost < cost) {
                    const double rel_cost = (cost - trial_cost) / cost;
                    const double rel_step = step.norm() / (x.norm() + opt.step_tolerance);
                    x = xt;
                    r = trial_r;
                    cost = trial_cost;
                    res.cost_history.push_back(cost);
                    lambda = std::max(lambda / opt.lambda_down, 1e-300);
                    accepted = true;
                    if (cost == 0.0) {
                        converged = true;
                        status = "exact fit";
                    } else if (rel_cost < opt.cost_tolerance) {
                        converged = true;
                        status = "relative cost change below tolerance";
                    } else if (rel_step < opt.step_tolerance) {
                        converged = true;
                        status = "relative step below tolerance";
                    }
                    break;
                }
            }
            lambda *= opt.lambda_up;
        }
        if (!accepted) {
            // No damped step lowers the cost any further: the iterate sits at
            // a minimum to working precision.
            converged = true;
            status = "no further decrease possible";
        }
    }
    if (!converged && !singular) status = "maximum iterations reached";

    res.n_iterations = iter;
    res.converged = converged && !singular;
    res.status = status;

    const auto n = static_cast<Eigen::Index>(asmb.n_params());
    const Eigen::MatrixXd jac = asmb.jacobian(x, r);
    Covariance cov = invert_normal_matrix(jac);
    res.rank_deficient = cov.rank_deficient || singular;
    if (!asmb.weighted()) {
        const double dof = static_cast<double>(asmb.n_residuals()) - static_cast<double>(n);
        cov.internal *= cost / std::max(dof, 1.0);
    }
    Eigen::VectorXd scale(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        scale[j] = asmb.specs()[static_cast<std::size_t>(j)].transform.derivative(x[j]);
    }
    res.values = asmb.external(x);
    res.covariance = scale.asDiagonal() * cov.internal * scale.asDiagonal();
    res.sigmas = res.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    res.residual_norm = std::sqrt(cost);

    if (opt.throw_on_failure) {
        if (singular) throw Error(Errc::SingularJacobian, "normal equations singular: " + status);
        if (!res.converged) {
            throw Error(Errc::NonConvergence, "no convergence after " + std::to_string(iter) + " iterations");
        }
    }
    return res;
}

}  // namespace

FitResult joint_fit(std::span<const Dataset> datasets, std::span<const ParamSpec> shared, const LmOptions& options) {
    Assembly asmb(datasets, shared);
    return run(asmb, options);
}

FitResult lm_fit(const ResidualProblem& problem, std::span<const ParamSpec> specs, const LmOptions& options) {
    Dataset ds{problem, {}, {}};
    std::vector<ParamSpec> shared;
    for (const auto& s : specs) {
        ds.parameters.push_back(s.name);
        if (s.shared) {
            shared.push_back(s);
        } else {
            ds.local.push_back(s);
        }
    }
    const Dataset one[] = {std::move(ds)};
    return joint_fit(one, shared, options);
}

Eigen::MatrixXd numeric_jacobian(const ResidualProblem& problem, std::span<const ParamSpec> specs,
                                 std::span<const double> internal) {
    Dataset ds{problem, {}, {specs.begin(), specs.end()}};
    for (const auto& s : specs) ds.parameters.push_back(s.name);
    const Dataset one[] = {ds};
    Assembly asmb(one, {});
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(internal.data(), static_cast<Eigen::Index>(internal.size()));
    Eigen::VectorXd r;
    if (!asmb.evaluate(x, r)) throw Error(Errc::EvaluationFailure, "residuals not evaluable");
    return asmb.jacobian(x, r);
}

}  // namespace linetherm::fit
