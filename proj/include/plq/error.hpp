#pragma once

#include <stdexcept>
#include <string>

namespace plq {

// Every failure the library can signal deliberately.  Validation kinds mean
// the input object is malformed; domain kinds mean the object is fine but the
// requested operation is not defined for it.
enum class Errc {
  // validation and parsing
  NonMonotoneBreakpoints,
  NonPositiveSlope,
  GeometricConsistencyViolation,
  EmptyMap,
  NegativeInput,
  DivisionByZero,
  InvalidArgument,
  SyntaxError,
  // domain
  TailNotClosed,
  IncommensurableScales,
  SlopeNotAboveOne,
  AnchorBelowTailStart,
  NotLinearTail,
  NotInH,
  InHNoWitness,
  RejectionLimitExceeded,
};

inline const char* errc_name(Errc k) {
  switch (k) {
    case Errc::NonMonotoneBreakpoints: return "NonMonotoneBreakpoints";
    case Errc::NonPositiveSlope: return "NonPositiveSlope";
    case Errc::GeometricConsistencyViolation: return "GeometricConsistencyViolation";
    case Errc::EmptyMap: return "EmptyMap";
    case Errc::NegativeInput: return "NegativeInput";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::TailNotClosed: return "TailNotClosed";
    case Errc::IncommensurableScales: return "IncommensurableScales";
    case Errc::SlopeNotAboveOne: return "SlopeNotAboveOne";
    case Errc::AnchorBelowTailStart: return "AnchorBelowTailStart";
    case Errc::NotLinearTail: return "NotLinearTail";
    case Errc::NotInH: return "NotInH";
    case Errc::InHNoWitness: return "InHNoWitness";
    case Errc::RejectionLimitExceeded: return "RejectionLimitExceeded";
  }
  return "UnknownError";
}

// Carries the failure kind plus, when the failure is tied to a spot in a text
// document, a 1-based line and column.  line == 0 means "no location".
class Error : public std::runtime_error {
 public:
  Error(Errc kind, const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(format(kind, message, line, column)),
        kind_(kind),
        line_(line),
        column_(column) {}

  Errc kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(Errc kind, const std::string& message, int line,
                            int column) {
    std::string out = errc_name(kind);
    out += ": ";
    out += message;
    if (line > 0) {
      out += " (line ";
      out += std::to_string(line);
      if (column > 0) {
        out += ", column ";
        out += std::to_string(column);
      }
      out += ")";
    }
    return out;
  }

  Errc kind_;
  int line_;
  int column_;
};

[[noreturn]] inline void fail(Errc kind, const std::string& message,
                              int line = 0, int column = 0) {
  throw Error(kind, message, line, column);
}

}  // namespace plq
