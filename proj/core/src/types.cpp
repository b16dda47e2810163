#include "linetherm/types.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"

#include <cmath>
#include <string>

namespace linetherm {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(Errc::InvalidArgument, what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

SystemParams SystemParams::device_default() {
    SystemParams p;
    p.f_r = 7.458e9;
    p.kappa = angular_from_cyclic(4.10e6);
    p.chi = angular_from_cyclic(-2.70e6);
    return p;
}

SystemParams SystemParams::from_state_linewidths(double f_r, double kappa_g, double kappa_e, double chi) {
    SystemParams p;
    p.f_r = f_r;
    p.kappa_g = kappa_g;
    p.kappa_e = kappa_e;
    p.kappa = 0.5 * (kappa_g + kappa_e);
    p.chi = chi;
    p.validate();
    return p;
}

void SystemParams::validate() const {
    require(finite_positive(f_r), "SystemParams: f_r must be > 0");
    require(finite_positive(kappa), "SystemParams: kappa must be > 0");
    require(std::isfinite(chi), "SystemParams: chi must be finite");
    require(kappa_g.has_value() == kappa_e.has_value(),
            "SystemParams: kappa_g and kappa_e must be given together");
    if (kappa_g) {
        require(finite_positive(*kappa_g) && finite_positive(*kappa_e),
                "SystemParams: state-resolved linewidths must be > 0");
        const double mean = 0.5 * (*kappa_g + *kappa_e);
        require(std::abs(mean - kappa) <= 1e-9 * kappa,
                "SystemParams: kappa must equal (kappa_g + kappa_e) / 2");
    }
}

void RateSample::validate() const {
    require(std::isfinite(value) && value >= 0.0, "RateSample: value must be >= 0");
    if (sigma) require(std::isfinite(*sigma) && *sigma >= 0.0, "RateSample: sigma must be >= 0");
}

void HeatPulseSeries::validate() const {
    require(std::isfinite(t_heat) && t_heat >= 0.0, "HeatPulseSeries: t_heat must be >= 0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        require(std::isfinite(s.t_cool) && s.t_cool >= 0.0, "HeatPulseSeries: t_cool must be >= 0");
        require(std::isfinite(s.gamma2_star) && std::isfinite(s.delta_f),
                "HeatPulseSeries: non-finite sample");
        if (i > 0) {
            require(s.t_cool > samples[i - 1].t_cool, "HeatPulseSeries: t_cool must be strictly increasing");
        }
    }
}

bool FinExperiment::validate(double tolerance) const {
    require(finite_positive(l_c), "FinExperiment: l_c must be > 0");
    require(std::isfinite(d_hc) && d_hc >= 0.0, "FinExperiment: d_hc must be >= 0");
    require(std::isfinite(w) && w >= 0.0, "FinExperiment: w must be >= 0");
    bool ordered = true;
    for (const auto& r : records) {
        require(std::isfinite(r.p_heat) && r.p_heat >= 0.0, "FinExperiment: p_heat must be >= 0");
        require(finite_positive(r.t_h) && finite_positive(r.t_o) && finite_positive(r.t_d),
                "FinExperiment: temperatures must be > 0");
        if (r.t_h + tolerance < r.t_o || r.t_o + tolerance < r.t_d) ordered = false;
    }
    return ordered;
}

void IQCloud::validate() const {
    require(points.size() >= 2, "IQCloud: at least two points required");
    require(finite_positive(f_q), "IQCloud: f_q must be > 0");
    for (const auto& p : points) {
        require(std::isfinite(p[0]) && std::isfinite(p[1]), "IQCloud: non-finite point");
    }
}

}  // namespace linetherm
