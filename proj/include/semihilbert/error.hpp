#pragma once

#include <stdexcept>
#include <string>

namespace semihilbert {

enum class ErrorKind {
  InvalidArgument,
  NotHermitian,
  NotPSD,
  NonSquare,
  NonConvergence,
  DimensionMismatch,
  NotAdjointable,
  MembershipMismatch,
  DegenerateZ,
  BadShape,
  UnknownCheck,
  NotAnInequality,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotAdjointable: return "NotAdjointable";
    case ErrorKind::MembershipMismatch: return "MembershipMismatch";
    case ErrorKind::DegenerateZ: return "DegenerateZ";
    case ErrorKind::BadShape: return "BadShape";
    case ErrorKind::UnknownCheck: return "UnknownCheck";
    case ErrorKind::NotAnInequality: return "NotAnInequality";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace semihilbert
