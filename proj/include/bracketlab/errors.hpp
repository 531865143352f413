#pragma once

#include <stdexcept>
#include <string>

namespace bracketlab {

/// Operand shapes do not agree (dimension mismatch, missing symbol, wrong arity).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition on a parameter was violated (nonpositive mass, det != 1, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a finite or trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by op_exp when the exponential would leave double range.
class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed polynomial expression text.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace bracketlab
