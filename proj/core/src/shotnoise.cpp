#include "linetherm/shotnoise.hpp"

#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"

#include <cmath>
#include <complex>

namespace linetherm::shotnoise {

namespace {

void check_photons(double n_bar) {
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
        throw Error(Errc::InvalidArgument, "photon number must be finite and >= 0");
    }
}

}  // namespace

ShotNoisePoint dephasing_full(double n_bar, const SystemParams& sys) {
    sys.validate();
    check_photons(n_bar);
    using cd = std::complex<double>;
    // sqrt(z0^2 + d) - z0 rewritten as d / (sqrt(z0^2 + d) + z0): Re(z0) = 1
    // and the principal root has Re >= 0, so the denominator never cancels.
    const cd z0(1.0, sys.chi / sys.kappa);
    const cd d(0.0, 4.0 * sys.chi * n_bar / sys.kappa);
    const cd root = std::sqrt(z0 * z0 + d);
    const cd photon_part = 0.5 * sys.kappa * d / (root + z0);

    ShotNoisePoint out;
    out.n_bar = n_bar;
    out.gamma_n = photon_part.real();
    out.delta_f_stark = photon_part.imag() / two_pi;
    out.lamb_shift = 0.5 * cyclic_from_angular(sys.chi);
    return out;
}

ShotNoisePoint dephasing_linear(double n_bar, const SystemParams& sys) {
    sys.validate();
    check_photons(n_bar);
    const double k = sys.kappa;
    const double c = sys.chi;
    const double pref = k * c / (k * k + c * c) * n_bar;
    ShotNoisePoint out;
    out.n_bar = n_bar;
    out.gamma_n = pref * c;
    out.delta_f_stark = pref * k / two_pi;
    out.lamb_shift = 0.5 * cyclic_from_angular(sys.chi);
    return out;
}

std::optional<std::string> linear_regime_warning(const SystemParams& sys) {
    if (std::abs(sys.chi) > sys.kappa) {
        return "linearized shot-noise model assumes |chi| <~ kappa, but |chi|/kappa = " +
               std::to_string(std::abs(sys.chi) / sys.kappa);
    }
    return std::nullopt;
}

double photons_from_dephasing(double gamma_n, const SystemParams& sys, double n_max) {
    sys.validate();
    if (!(gamma_n >= 0.0) || !std::isfinite(gamma_n)) {
        throw Error(Errc::InvalidArgument, "dephasing rate must be finite and >= 0");
    }
    if (!(n_max > 0.0)) throw Error(Errc::InvalidArgument, "n_max must be > 0");
    if (gamma_n == 0.0) return 0.0;
    if (gamma_n > dephasing_full(n_max, sys).gamma_n) {
        throw Error(Errc::OutOfRange, "dephasing rate exceeds the model value at n_max = " + std::to_string(n_max));
    }
    double lo = 0.0;
    double hi = n_max;
    // Bisect until the bracket cannot shrink any further in double precision.
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (dephasing_full(mid, sys).gamma_n < gamma_n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double bose_einstein(double temperature, double f_hz) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw Error(Errc::InvalidArgument, "temperature must be > 0");
    }
    if (!(f_hz > 0.0) || !std::isfinite(f_hz)) throw Error(Errc::InvalidArgument, "frequency must be > 0");
    return 1.0 / std::expm1(photon_temperature(f_hz) / temperature);
}

double temperature_from_photons(double n_bar, double f_hz) {
    if (!(n_bar > 0.0) || !std::isfinite(n_bar)) throw Error(Errc::InvalidArgument, "photon number must be > 0");
    if (!(f_hz > 0.0) || !std::isfinite(f_hz)) throw Error(Errc::InvalidArgument, "frequency must be > 0");
    return photon_temperature(f_hz) / std::log1p(1.0 / n_bar);
}

}  // namespace linetherm::shotnoise
