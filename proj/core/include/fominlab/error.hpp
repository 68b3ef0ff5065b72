#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fominlab {

enum class ErrorCode {
  InvalidArgument,
  InvalidDomain,
  NotOnBoundary,
  DuplicatePoint,
  WrongCyclicOrder,
  SolverDidNotConverge,
  ZeroDiagonal,
  NoInteriorNeighbor,
  ImpossibleConditioning,
  NoIntersection,
  CoincidentPoints,
  InfinitePoint,
  OrderViolation,
  StepTooLarge,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::WrongCyclicOrder: return "WrongCyclicOrder";
    case ErrorCode::SolverDidNotConverge: return "SolverDidNotConverge";
    case ErrorCode::ZeroDiagonal: return "ZeroDiagonal";
    case ErrorCode::NoInteriorNeighbor: return "NoInteriorNeighbor";
    case ErrorCode::ImpossibleConditioning: return "ImpossibleConditioning";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::InfinitePoint: return "InfinitePoint";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace fominlab
