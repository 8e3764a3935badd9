#pragma once

#include <stdexcept>
#include <string>

namespace rtmhd {

enum class ErrorKind {
    InvalidArgument,
    NonPositiveDensity,
    NoUnstableRegion,
    ZeroFrequency,
    FactorizationBreakdown,
    BracketFailure,
    InconsistentDecision,
    OutOfRange,
    EmptyDomain,
    ResidualTooLarge,
    Io,
    SolverSingular,
    DegenerateSeries,
    SharpnessViolation,
    Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace rtmhd
