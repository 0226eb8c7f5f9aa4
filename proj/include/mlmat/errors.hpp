#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mlmat {

enum class ErrorCode {
    InvalidArgument,
    PoleOfGamma,
    Overflow,
    ArgumentOutOfRange,
    AccuracyLost,
    TargetUnreachable,
    NoConvergence,
    SwapInstability,
    SlowTaylorDecay,
    NearSingularSeparation,
    DerivativeBudget,
    ZeroFunctionNorm,
    IrrationalOrder,
    NodeBudget,
    ParseError,
    DimensionError,
    SchemaError,
    BudgetExceeded,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code identifies the failure
// mode so callers can fall back (e.g. series -> contour integral).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mlmat
