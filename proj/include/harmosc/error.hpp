#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace harmosc {

enum class ErrorCode {
    InvalidArgument,
    DegenerateLeadingCoefficient,
    SingularSystem,
    Overconstrained,
    Underconstrained,
    ZeroPivot,
    EventBeyondHorizon,
    ResolutionViolation,
    NonFiniteState,
    PoleProximity,
    TooShort,
    WindowTooLong,
    WindowTooShort,
    NoTransient,
    VerificationFailed,
};

std::string_view to_string(ErrorCode code);

// Validation errors are caller mistakes; numerical errors come from the data.
enum class ErrorCategory { Validation, Numerical };

ErrorCategory category(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

}  // namespace harmosc
