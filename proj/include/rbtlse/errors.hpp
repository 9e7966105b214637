#pragma once

#include <stdexcept>
#include <string>

namespace rbtlse {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  AssumptionViolated,
  GapConditionFailed,
  BlockNotInvertible,
  DegenerateSpectrum,
  ConditioningUndefined,
  SizeLimit,
  NonConvergence,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is what
/// callers branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for the solver-side failures (assumptions, gap, spectrum, ...),
  /// as opposed to shape misuse or I/O.
  bool is_solver_error() const noexcept;

 private:
  ErrorCode code_;
};

/// Power iteration ran out of iterations. The last estimate is kept so the
/// caller can decide whether it is usable.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_estimate, int iterations)
      : Error(ErrorCode::NonConvergence, what),
        best_estimate_(best_estimate),
        iterations_(iterations) {}

  double best_estimate() const noexcept { return best_estimate_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_estimate_;
  int iterations_;
};

}  // namespace rbtlse
