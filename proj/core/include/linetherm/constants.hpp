#pragma once

#include <numbers>

namespace linetherm {

/// Exact SI (2019) values of the constants used for photon/temperature
/// conversions.
struct PhysConstants {
    static constexpr double h = 6.62607015e-34;   // J s
    static constexpr double k_B = 1.380649e-23;   // J / K
};

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Photon energy expressed as a temperature, h f / k_B (K).
constexpr double photon_temperature(double f_hz) noexcept {
    return PhysConstants::h * f_hz / PhysConstants::k_B;
}

/// Rates quoted in "kHz" are plain events per millisecond, not angular.
double rate_from_khz(double khz);
double rate_to_khz(double per_s) noexcept;

constexpr double angular_from_cyclic(double f_hz) noexcept { return two_pi * f_hz; }
constexpr double cyclic_from_angular(double omega) noexcept { return omega / two_pi; }

constexpr double kelvin_from_mk(double mk) noexcept { return mk * 1e-3; }
constexpr double mk_from_kelvin(double k) noexcept { return k * 1e3; }

}  // namespace linetherm
