#include "signet/error.hpp"

namespace signet {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::ZeroWeight: return "ZeroWeight";
        case ErrorCode::BadVertex: return "BadVertex";
        case ErrorCode::BadSignatureLength: return "BadSignatureLength";
        case ErrorCode::BadArgument: return "BadArgument";
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::CannotConnect: return "CannotConnect";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::TooLargeForExact: return "TooLargeForExact";
        case ErrorCode::FormulaMismatch: return "FormulaMismatch";
        case ErrorCode::DegenerateBound: return "DegenerateBound";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::MissingPi1d: return "MissingPi1d";
        case ErrorCode::NoTransition: return "NoTransition";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DisconnectedGraph:
        case ErrorCode::SelfLoop:
        case ErrorCode::DuplicateEdge:
        case ErrorCode::ZeroWeight:
        case ErrorCode::BadVertex:
        case ErrorCode::BadSignatureLength:
        case ErrorCode::BadArgument:
        case ErrorCode::UnknownKind:
        case ErrorCode::ParseError:
        case ErrorCode::TooLargeForExact:
        case ErrorCode::StepTooLarge:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorCode code, std::string op, const std::string& message)
    : std::runtime_error(op + ": " + std::string(to_string(code)) + ": " + message),
      code_(code),
      op_(std::move(op)) {}

}  // namespace signet
