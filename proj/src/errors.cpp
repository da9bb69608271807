#include "errors.hpp"

namespace superlase {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain:
      return "domain";
    case ErrorCode::Config:
      return "config";
    case ErrorCode::Spec:
      return "spec";
    case ErrorCode::Singular:
      return "singular";
    case ErrorCode::NoMinimum:
      return "no-minimum";
    case ErrorCode::Bracket:
      return "bracket";
    case ErrorCode::Stiffness:
      return "stiffness";
    case ErrorCode::Divergence:
      return "divergence";
    case ErrorCode::Io:
      return "io";
  }
  return "unknown";
}

}  // namespace superlase
