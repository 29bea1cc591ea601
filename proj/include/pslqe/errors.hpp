#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pslqe {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, e.g. a precision below the supported floor.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unusable input data.
class InputError : public Error {
 public:
  using Error::Error;
};

class UnsupportedConstant : public Error {
 public:
  using Error::Error;
};

/// A vector file could not be parsed; carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A zero diagonal or zero rotation norm where the algorithm requires a
/// nonsingular pivot.
class DegenerateMatrix : public Error {
 public:
  using Error::Error;
};

/// A bound was requested outside the hypotheses under which it is proved.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// The requested error budget cannot be met; `constraint()` names the
/// inequality that failed.
class InfeasiblePlan : public Error {
 public:
  InfeasiblePlan(std::string constraint, const std::string& detail)
      : Error("infeasible plan: " + constraint + " (" + detail + ")"),
        constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

}  // namespace pslqe
