#include "harmosc/error.hpp"

namespace harmosc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::Overconstrained: return "Overconstrained";
        case ErrorCode::Underconstrained: return "Underconstrained";
        case ErrorCode::ZeroPivot: return "ZeroPivot";
        case ErrorCode::EventBeyondHorizon: return "EventBeyondHorizon";
        case ErrorCode::ResolutionViolation: return "ResolutionViolation";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::PoleProximity: return "PoleProximity";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::WindowTooLong: return "WindowTooLong";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::NoTransient: return "NoTransient";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

ErrorCategory category(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroPivot:
        case ErrorCode::ResolutionViolation:
        case ErrorCode::NonFiniteState:
        case ErrorCode::PoleProximity:
        case ErrorCode::NoTransient:
        case ErrorCode::VerificationFailed:
            return ErrorCategory::Numerical;
        default:
            return ErrorCategory::Validation;
    }
}

}  // namespace harmosc
