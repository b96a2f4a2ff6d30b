#pragma once

/**
 * @file error.hpp
 * @brief Error codes shared by every module of the idempotent toolkit.
 */

#include <stdexcept>
#include <string>
#include <string_view>

namespace idem {

enum class ErrorCode {
    InvalidArgument,
    NotSquarefree,
    NotFactorable,
    NotCoprime,
    ModuliNotCoprime,
    WrongPrimeCount,
    BudgetExceeded,
    ModulusMismatch,
    NotConstant,
    NotIdempotentDet,
    PrimesOutOfScope,
    InternalTheoremViolation,
    UnsatisfiableParams,
    InvalidLabel,
    MalformedInput,
};

/// Stable machine-readable name, e.g. "NotSquarefree".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace idem
