#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace signet {

enum class ErrorCode {
    // input / configuration
    DisconnectedGraph,
    SelfLoop,
    DuplicateEdge,
    ZeroWeight,
    BadVertex,
    BadSignatureLength,
    BadArgument,
    UnknownKind,
    ParseError,
    // numerical
    NoConvergence,
    CannotConnect,
    NotSymmetric,
    BracketFailure,
    StepTooLarge,
    TooLargeForExact,
    FormulaMismatch,
    DegenerateBound,
    NonFiniteState,
    MissingPi1d,
    NoTransition,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes caused by bad input rather than a numerical failure.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string op, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    const std::string& op() const noexcept { return op_; }

private:
    ErrorCode code_;
    std::string op_;
};

}  // namespace signet
