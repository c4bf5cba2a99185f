#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plateau {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed curvature expression; `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Domain failure while evaluating a field (division by zero, sqrt of a negative, non-finite result).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Geometric precondition violated (zero speed, undersampled lift, anti-parallel corner, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Theorem hypotheses not met (positivity, sup k < 1/a, k0 a < 1, window violation).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Integrator, Newton or continuation failure.
class NumericalError : public Error {
 public:
  enum class Kind {
    StepUnderflow,
    LeftBox,
    MaxIterations,
    SingularJacobian,
    LineSearch,
    JacobianMismatch,
    ContinuationUnderflow,
    ClassificationChanged,
    Degenerate,
    Eigensolver,
  };
  NumericalError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Malformed input file; `line` is 1-based.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace plateau
