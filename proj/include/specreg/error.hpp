#pragma once

#include <stdexcept>
#include <string>

namespace specreg {

/// Base of every error raised by the library. Callers that only need to
/// distinguish "bad input" from "the mathematics refused" can catch the
/// subclasses below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside an operation's domain (non-square, non-finite, delta out
/// of range, empty sweeps, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Matrix Market or config text that does not parse.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised by eig when two eigenvalues are closer than the distinctness
/// tolerance or the spectral expansion fails to reconstruct the input.
/// This is a signal about the input, not a failure of the solver.
class NearDefective : public Error {
 public:
  NearDefective(const std::string& what, double gap)
      : Error(what), gap_(gap) {}

  /// Offending eigenvalue separation (or the reconstruction residual when the
  /// eigenvalues themselves were separated).
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// A scalar function was not finite at an eigenvalue.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A pseudospectral grid is too coarse for the requested epsilon.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace specreg
