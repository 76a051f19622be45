#pragma once

#include <stdexcept>
#include <string>

namespace solab {

enum class ErrorCode {
    InvalidArgument,
    Overflow,
    NonzeroAverage,
    ResonantMode,
    CertificateFailure,
    ChainDoesNotResolve,
    SupportMargin,
    IterationBudgetExceeded,
    ContractivityViolated,
    DegenerateNormalization,
    DenominatorNearZero,
    OutOfDomain,
    ParseError,
    IoError,
    Internal,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the library; `code` keys the C API status mapping.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::NonzeroAverage: return "NonzeroAverage";
        case ErrorCode::ResonantMode: return "ResonantMode";
        case ErrorCode::CertificateFailure: return "CertificateFailure";
        case ErrorCode::ChainDoesNotResolve: return "ChainDoesNotResolve";
        case ErrorCode::SupportMargin: return "SupportMargin";
        case ErrorCode::IterationBudgetExceeded: return "IterationBudgetExceeded";
        case ErrorCode::ContractivityViolated: return "ContractivityViolated";
        case ErrorCode::DegenerateNormalization: return "DegenerateNormalization";
        case ErrorCode::DenominatorNearZero: return "DenominatorNearZero";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

} // namespace solab
