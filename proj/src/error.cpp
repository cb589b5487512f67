#include "ringlab/error.hpp"

namespace ringlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ZeroConstantTerm: return "ZeroConstantTerm";
    case ErrorKind::NonzeroInnerConstant: return "NonzeroInnerConstant";
    case ErrorKind::NonInvertible: return "NonInvertible";
    case ErrorKind::ZeroMean: return "ZeroMean";
    case ErrorKind::ZeroFirstCumulant: return "ZeroFirstCumulant";
    case ErrorKind::InconsistentInput: return "InconsistentInput";
    case ErrorKind::OrderTooLarge: return "OrderTooLarge";
    case ErrorKind::KindMismatch: return "KindMismatch";
    case ErrorKind::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorKind::EvaluationDomain: return "EvaluationDomain";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoValidBranch: return "NoValidBranch";
    case ErrorKind::AmbiguousBranch: return "AmbiguousBranch";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::EdgeSingularity: return "EdgeSingularity";
    case ErrorKind::IllConditioned: return "IllConditioned";
  }
  return "Unknown";
}

bool is_solver_failure(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NoConvergence:
    case ErrorKind::NoValidBranch:
    case ErrorKind::AmbiguousBranch:
    case ErrorKind::NoRoot:
    case ErrorKind::EdgeSingularity:
    case ErrorKind::IllConditioned:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace ringlab
