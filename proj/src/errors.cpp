#include "mlmat/errors.hpp"

namespace mlmat {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleOfGamma: return "PoleOfGamma";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ArgumentOutOfRange: return "ArgumentOutOfRange";
    case ErrorCode::AccuracyLost: return "AccuracyLost";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SwapInstability: return "SwapInstability";
    case ErrorCode::SlowTaylorDecay: return "SlowTaylorDecay";
    case ErrorCode::NearSingularSeparation: return "NearSingularSeparation";
    case ErrorCode::DerivativeBudget: return "DerivativeBudget";
    case ErrorCode::ZeroFunctionNorm: return "ZeroFunctionNorm";
    case ErrorCode::IrrationalOrder: return "IrrationalOrder";
    case ErrorCode::NodeBudget: return "NodeBudget";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    }
    return "Unknown";
}

}  // namespace mlmat
