#pragma once

#include <stdexcept>
#include <string>

namespace flagcert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input: graph notation, rationals, JSON, SDPA files.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition on argument values failed (vertex out of range, order
/// mismatch, uniformity mismatch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A problem exceeds a built-in size cap (graph order, internal solver).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The interior-point solver stopped without meeting its tolerances.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Rounding a floating solution to an exact one failed.
class RoundingError : public Error {
 public:
  using Error::Error;
};

}  // namespace flagcert
