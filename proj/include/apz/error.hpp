#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apz {

enum class ErrorCode {
  ParseError,
  DomainError,
  PrecisionExhausted,
  DepthExceeded,
  EmptyCoefficients,
  EvaluationAtSingularity,
  ToleranceUnreachable,
  NonzeroMean,
  RationalAlpha,
  SmallDivisorOverflow,
  MissingCheckpoints,
  DegenerateTrace,
  PoleError,
  IllConditioned,
  QuadratureFailure,
  DepthCap,
  ConvergenceTooSlow,
  NonOddResidue,
  NearPole,
  ZeroTargetCoefficient,
  PoleAtRootOfUnity,
  EmptyMask,
};

std::string_view to_string(ErrorCode code) noexcept;

// All domain failures surface as this exception. `context` is a short
// machine-readable detail (offending index, parameter value, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace apz
