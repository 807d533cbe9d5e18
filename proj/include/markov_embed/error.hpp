#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace markov {

enum class ErrorCode {
    NonFinite,
    InvalidDimension,
    DimensionMismatch,
    RowSumViolation,
    NegativeEntry,
    MetzlerViolation,
    SpectrumOnCut,
    Singular,
    ConvergenceFailure,
    PeripheralSpectrum,
    OracleMismatch,
    NotEqualInput,
    DegenerateSum,
    DimensionTooLarge,
    ConstraintViolation,
    NotDoublyStochastic,
    OutOfDomain,
    NotCyclic,
    InternalConsistency,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every module of the library. The code identifies the
/// violated precondition; the message carries the offending value.
class EmbedError : public std::runtime_error {
public:
    EmbedError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace markov
