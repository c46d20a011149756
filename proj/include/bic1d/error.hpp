#pragma once

#include <stdexcept>
#include <string>

namespace bic1d {

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Pole,
  Overflow,
  NearIntegerOrder,
  AccuracyLoss,
  ConvergenceFailure,
  IntegerOrder,
  NotAnEigenvalue,
  BracketFailure,
  IllConditioned,
  StepUnderflow,
  InsufficientExtrema,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for every numerical or contract failure in the library.
// partial_abs_err carries the best error estimate reached before giving up, when
// one exists (negative otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double partial_abs_err = -1.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        partial_abs_err_(partial_abs_err) {}

  ErrorKind kind() const noexcept { return kind_; }
  double partial_abs_err() const noexcept { return partial_abs_err_; }

 private:
  ErrorKind kind_;
  double partial_abs_err_;
};

}  // namespace bic1d
