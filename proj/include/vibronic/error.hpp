#pragma once

#include <stdexcept>
#include <string>

namespace vibronic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed arguments, unknown names, dimension mismatches.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical tolerance could not be met.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Population leaked into the top of a truncated Fock space, or norm was lost.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A projective measurement outcome with (numerically) zero probability.
class DegenerateOutcome : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace vibronic
