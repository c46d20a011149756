#include "bic1d/error.hpp"

namespace bic1d {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return "invalid argument";
    case ErrorKind::Domain:
      return "domain error";
    case ErrorKind::Pole:
      return "pole";
    case ErrorKind::Overflow:
      return "overflow";
    case ErrorKind::NearIntegerOrder:
      return "near-integer order";
    case ErrorKind::AccuracyLoss:
      return "accuracy loss";
    case ErrorKind::ConvergenceFailure:
      return "convergence failure";
    case ErrorKind::IntegerOrder:
      return "integer order";
    case ErrorKind::NotAnEigenvalue:
      return "not an eigenvalue";
    case ErrorKind::BracketFailure:
      return "bracket refinement failure";
    case ErrorKind::IllConditioned:
      return "ill-conditioned";
    case ErrorKind::StepUnderflow:
      return "step underflow";
    case ErrorKind::InsufficientExtrema:
      return "insufficient extrema";
  }
  return "unknown error";
}

}  // namespace bic1d
