#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vsheet {

// Base class for all analysis errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid value outside an operation's domain (nonpositive density, zero
// projection axis, zero frequency, ...).
struct DomainError : Error {
  using Error::Error;
};

// Frequency too close to a pole of the symbol reduction:
// |k1| * |k1^2 + k2| fell below the guard, or the algebraic block of the
// 13x13 symbol became numerically singular. Callers classify, not crash.
struct PoleProximity : Error {
  double factor;  // offending |k1| * |k1^2 + k2| (or rcond for the 13x13 block)
  double guard;
  PoleProximity(const std::string& what, double factor_, double guard_)
      : Error(what), factor(factor_), guard(guard_) {}
};

// Two boundary traces disagree where the jump conditions force equality
// (tangential interface slopes, or rho/c across the sheet).
struct InconsistentTrace : Error {
  using Error::Error;
};

// The 13x13 variable transformation T is numerically singular.
struct DegenerateTransformation : Error {
  double condition;
  DegenerateTransformation(const std::string& what, double condition_)
      : Error(what), condition(condition_) {}
};

// The factored determinant presumes the primary eigenvector normalization;
// thrown when the fallback eigenvector fired and the comparison is off.
struct FactoredFormUnavailable : Error {
  using Error::Error;
};

// The bracket scan found a number of sign changes other than two. Carries
// the scan trace so the caller can distinguish an out-of-theory parameter
// regime from a tolerance misconfiguration.
struct RootCountAnomaly : Error {
  int count;
  std::vector<double> trace;
  RootCountAnomaly(const std::string& what, int count_, std::vector<double> trace_)
      : Error(what), count(count_), trace(std::move(trace_)) {}
};

// Configuration parse/validation failure; `key` names the offending field.
struct ConfigError : Error {
  std::string key;
  ConfigError(const std::string& what, std::string key_)
      : Error(what), key(std::move(key_)) {}
};

}  // namespace vsheet
