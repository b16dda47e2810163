#include "linetherm/constants.hpp"
#include "linetherm/error.hpp"

#include <cmath>

namespace linetherm {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::MismatchedSpec: return "MismatchedSpec";
        case Errc::NegativeDephasing: return "NegativeDephasing";
        case Errc::RatioBelowOne: return "RatioBelowOne";
        case Errc::UnphysicalRatio: return "UnphysicalRatio";
        case Errc::NoPointsBelowThreshold: return "NoPointsBelowThreshold";
        case Errc::InvertedPopulation: return "InvertedPopulation";
        case Errc::SpanTooNarrow: return "SpanTooNarrow";
        case Errc::SingularSystem: return "SingularSystem";
        case Errc::Schema: return "Schema";
        case Errc::Io: return "Io";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::SingularJacobian: return "SingularJacobian";
        case Errc::EvaluationFailure: return "EvaluationFailure";
        case Errc::DegenerateCovariance: return "DegenerateCovariance";
        case Errc::AllExcluded: return "AllExcluded";
    }
    return "Unknown";
}

bool is_numerical_failure(Errc code) noexcept {
    switch (code) {
        case Errc::OutOfRange:
        case Errc::NonConvergence:
        case Errc::SingularJacobian:
        case Errc::EvaluationFailure:
        case Errc::DegenerateCovariance:
        case Errc::AllExcluded:
            return true;
        default:
            return false;
    }
}

double rate_from_khz(double khz) {
    if (!(khz >= 0.0) || !std::isfinite(khz)) {
        throw Error(Errc::InvalidArgument, "rate must be a finite non-negative number");
    }
    return khz * 1e3;
}

double rate_to_khz(double per_s) noexcept { return per_s * 1e-3; }

}  // namespace linetherm
