#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linetherm {

/// Failure categories raised by the analysis library.
///
/// The first group signals invalid input (the caller can fix it); the
/// second group signals that a fit or inversion could not produce a
/// trustworthy answer for otherwise valid input.
enum class Errc {
    // input validation
    InvalidArgument,
    InsufficientData,
    MismatchedSpec,
    NegativeDephasing,
    RatioBelowOne,
    UnphysicalRatio,
    NoPointsBelowThreshold,
    InvertedPopulation,
    SpanTooNarrow,
    SingularSystem,
    Schema,
    Io,
    // numerical failure
    OutOfRange,
    NonConvergence,
    SingularJacobian,
    EvaluationFailure,
    DegenerateCovariance,
    AllExcluded,
};

std::string_view to_string(Errc code) noexcept;

/// True for codes that indicate a fit/inversion failure rather than bad input.
bool is_numerical_failure(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace linetherm
