#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ethnokinetics {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An integrator produced NaN, an overflow, or (direct SDE form) a
/// non-positive population. Usually means dt is too large.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// beta12 > 0 or beta32 > 0 where the stochastic/prism machinery needs
/// both non-positive.
class ParamSignViolation : public Error {
 public:
  using Error::Error;
};

/// A time-gate (birth or communication onset) does not sit on a grid point.
class KnotMisalignment : public Error {
 public:
  using Error::Error;
};

/// Linearisation requested at a point that is not a steady state.
class ResidualTooLarge : public Error {
 public:
  using Error::Error;
};

/// The prism builder could not find a base box below the scan ceiling.
class NoValidBase : public Error {
 public:
  using Error::Error;
};

/// Invariant violation in user supplied data; field() names the culprit.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed configuration text; line() is 1-based (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownPreset : public Error {
 public:
  using Error::Error;
};

}  // namespace ethnokinetics
