#include "calband/error.hpp"

namespace calband {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
        case ErrorCode::GridTooLarge: return "GridTooLarge";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::OutcomeOutOfRange: return "OutcomeOutOfRange";
        case ErrorCode::ApproachabilityViolated: return "ApproachabilityViolated";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace calband
