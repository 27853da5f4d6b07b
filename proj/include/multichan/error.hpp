#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace multichan {

/// Failure categories surfaced by the library. Each maps to a stable name used
/// in CLI diagnostics and to an exit status (see cli.hpp).
enum class ErrorCode {
    ParseError,
    InvalidInput,
    NonPositivePrior,
    PriorNotNormalized,
    MatrixShapeMismatch,
    BadEpsilon,
    ReceiverCountMismatch,
    DuplicateRows,
    StateSpaceMismatch,
    PriorOutsideHull,
    NotAForest,
    GridMismatch,
    InvariantViolation,
    DominatedTarget,
    NoCarrierChannel,
    NoKeyChannel,
    AlphabetTooSmall,
    SuperiorityViolated,
    Infeasible,
    BudgetExceeded,
    UnknownCommand,
    FileError,
    Usage,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonPositivePrior: return "NonPositivePrior";
    case ErrorCode::PriorNotNormalized: return "PriorNotNormalized";
    case ErrorCode::MatrixShapeMismatch: return "MatrixShapeMismatch";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::ReceiverCountMismatch: return "ReceiverCountMismatch";
    case ErrorCode::DuplicateRows: return "DuplicateRows";
    case ErrorCode::StateSpaceMismatch: return "StateSpaceMismatch";
    case ErrorCode::PriorOutsideHull: return "PriorOutsideHull";
    case ErrorCode::NotAForest: return "NotAForest";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DominatedTarget: return "DominatedTarget";
    case ErrorCode::NoCarrierChannel: return "NoCarrierChannel";
    case ErrorCode::NoKeyChannel: return "NoKeyChannel";
    case ErrorCode::AlphabetTooSmall: return "AlphabetTooSmall";
    case ErrorCode::SuperiorityViolated: return "SuperiorityViolated";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::FileError: return "FileError";
    case ErrorCode::Usage: return "Usage";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace multichan
