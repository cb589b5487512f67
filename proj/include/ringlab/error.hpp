#pragma once

#include <stdexcept>
#include <string>

namespace ringlab {

enum class ErrorKind {
  // input / precondition failures
  NonFinite,
  ZeroConstantTerm,
  NonzeroInnerConstant,
  NonInvertible,
  ZeroMean,
  ZeroFirstCumulant,
  InconsistentInput,
  OrderTooLarge,
  KindMismatch,
  UnsupportedVariant,
  EvaluationDomain,
  Overflow,
  Parse,
  InvalidArgument,
  // solver failures
  NoConvergence,
  NoValidBranch,
  AmbiguousBranch,
  NoRoot,
  EdgeSingularity,
  IllConditioned,
};

const char* to_string(ErrorKind kind) noexcept;

/// True for failures of a numerical solver, false for bad input.
bool is_solver_failure(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ringlab
