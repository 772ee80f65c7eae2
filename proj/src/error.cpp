#include "apz/error.hpp"

namespace apz {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::EmptyCoefficients: return "EmptyCoefficients";
    case ErrorCode::EvaluationAtSingularity: return "EvaluationAtSingularity";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::NonzeroMean: return "NonzeroMean";
    case ErrorCode::RationalAlpha: return "RationalAlpha";
    case ErrorCode::SmallDivisorOverflow: return "SmallDivisorOverflow";
    case ErrorCode::MissingCheckpoints: return "MissingCheckpoints";
    case ErrorCode::DegenerateTrace: return "DegenerateTrace";
    case ErrorCode::PoleError: return "PoleError";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DepthCap: return "DepthCap";
    case ErrorCode::ConvergenceTooSlow: return "ConvergenceTooSlow";
    case ErrorCode::NonOddResidue: return "NonOddResidue";
    case ErrorCode::NearPole: return "NearPole";
    case ErrorCode::ZeroTargetCoefficient: return "ZeroTargetCoefficient";
    case ErrorCode::PoleAtRootOfUnity: return "PoleAtRootOfUnity";
    case ErrorCode::EmptyMask: return "EmptyMask";
  }
  return "Unknown";
}

}  // namespace apz
