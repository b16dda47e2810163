#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace linetherm {

/// Readout resonator parameters consumed by every photon-number conversion.
///
/// `f_r` is cyclic (Hz); `kappa`, `chi` and the optional state-resolved
/// linewidths are angular (rad/s). `chi` keeps its sign.
struct SystemParams {
    double f_r = 0.0;
    double kappa = 0.0;
    double chi = 0.0;
    std::optional<double> kappa_g;
    std::optional<double> kappa_e;

    /// Device defaults: f_r = 7.458 GHz, kappa/2pi = 4.10 MHz, chi/2pi = -2.70 MHz.
    static SystemParams device_default();

    /// Builds the parameter set from state-resolved linewidths, with
    /// kappa set to their mean.
    static SystemParams from_state_linewidths(double f_r, double kappa_g, double kappa_e, double chi);

    /// Throws Error(InvalidArgument) if an invariant is violated.
    void validate() const;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct RateSample {
    double value = 0.0;
    std::optional<double> sigma;

    void validate() const;
};

struct HeatPulseSample {
    double t_cool = 0.0;       // s
    double gamma2_star = 0.0;  // 1/s
    double delta_f = 0.0;      // Hz, signed
};

struct HeatPulseSeries {
    double t_heat = 0.0;  // s
    std::vector<HeatPulseSample> samples;

    void validate() const;
};

struct FinRecord {
    double p_heat = 0.0;  // W
    double t_h = 0.0;     // K
    double t_o = 0.0;     // K
    double t_d = 0.0;     // K
};

struct FinExperiment {
    double l_c = 0.0;   // clamp length (m)
    double d_hc = 0.0;  // thermometer-to-clamp distance (m)
    double w = 0.0;     // stripline width (m), metadata
    std::vector<FinRecord> records;

    /// Throws on hard violations. Returns false when some record breaks
    /// the ordering T_h >= T_o >= T_d by more than `tolerance` (K).
    bool validate(double tolerance = 1e-3) const;
};

using IQPoint = std::array<double, 2>;

struct IQCloud {
    std::vector<IQPoint> points;
    double f_q = 0.0;  // Hz

    std::size_t n_points() const noexcept { return points.size(); }
    void validate() const;
};

}  // namespace linetherm
