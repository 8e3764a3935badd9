#include "rtmhd/errors.hpp"

namespace rtmhd {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
        case ErrorKind::NoUnstableRegion: return "NoUnstableRegion";
        case ErrorKind::ZeroFrequency: return "ZeroFrequency";
        case ErrorKind::FactorizationBreakdown: return "FactorizationBreakdown";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::InconsistentDecision: return "InconsistentDecision";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::EmptyDomain: return "EmptyDomain";
        case ErrorKind::ResidualTooLarge: return "ResidualTooLarge";
        case ErrorKind::Io: return "Io";
        case ErrorKind::SolverSingular: return "SolverSingular";
        case ErrorKind::DegenerateSeries: return "DegenerateSeries";
        case ErrorKind::SharpnessViolation: return "SharpnessViolation";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace rtmhd
