#pragma once

#include <stdexcept>
#include <string>

namespace airdrop {

enum class ErrorCode {
    MissingFile,
    SchemaError,
    DuplicateTxHash,
    NonPositiveAmount,
    DuplicateGroupId,
    EmptyGroup,
    MissingPrice,
    NegativeFee,
    EmptyActivity,
    DomainError,
    SizeLimit,
    OrderingViolation,
    InfeasibleOrdering,
    NoRoot,
    NonConvergence,
    SpecError,
    UnknownKind,
    Precondition,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::MissingFile: return "MissingFile";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::DuplicateTxHash: return "DuplicateTxHash";
        case ErrorCode::NonPositiveAmount: return "NonPositiveAmount";
        case ErrorCode::DuplicateGroupId: return "DuplicateGroupId";
        case ErrorCode::EmptyGroup: return "EmptyGroup";
        case ErrorCode::MissingPrice: return "MissingPrice";
        case ErrorCode::NegativeFee: return "NegativeFee";
        case ErrorCode::EmptyActivity: return "EmptyActivity";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::SizeLimit: return "SizeLimit";
        case ErrorCode::OrderingViolation: return "OrderingViolation";
        case ErrorCode::InfeasibleOrdering: return "InfeasibleOrdering";
        case ErrorCode::NoRoot: return "NoRoot";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::SpecError: return "SpecError";
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::Precondition: return "Precondition";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Solver-side failures map to a distinct process exit code in the CLI.
inline bool is_solver_error(ErrorCode c) {
    return c == ErrorCode::NoRoot || c == ErrorCode::NonConvergence ||
           c == ErrorCode::InfeasibleOrdering;
}

} // namespace airdrop
