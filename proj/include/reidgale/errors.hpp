#pragma once

#include <stdexcept>
#include <string>

namespace reidgale {

enum class ErrorCode {
    NotSL,
    NotFaithful,
    DegenerateWeight,
    SchemaError,
    ValidationError,
    NonIntegralRelation,
    OpenStar,
    NotLocallyFree,
    InconsistentSupport,
    NonIntegralDegree,
    InconsistentDegrees,
    NonIntegralChi,
    NotUnimodular,
    RankMismatch,
    NotABasis,
    NotSurjective,
    NotAKernelBasis,
    DimensionMismatch,
    IoError,
};

const char* to_string(ErrorCode code);

/// Error carrying a machine-readable code; the CLI maps these to exit 1
/// with a module-qualified JSON diagnostic.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace reidgale
