#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace midconv {

enum class ErrorCode {
  InvalidInput,
  ParseError,
  ModeMismatch,
  SizeMismatch,
  MissingGenerator,
  ConventionViolation,
  SearchBudgetExceeded,
  MaxStepsExceeded,
  PreconditionViolation,
  NoFixedVectorFreePoint,
  BoundaryNotSurjective,
  ConventionViolationNumeric,
  QuotientRankMismatch,
  CyclicClosureViolation,
  NoMovableEigenvalue,
  PreconditionDefectNegative,
  PreconditionDim2,
  DegreeNotIntegral,
  InternalError,
};

std::string_view error_code_name(ErrorCode code);

/// True for outcomes where the input was well formed but the mathematics
/// rules the request out (empty moduli, unconstructible, convention failure).
bool is_principled_negative(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace midconv
