#pragma once

#include <stdexcept>
#include <string>

namespace gaussnc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: wrong shapes, out-of-domain parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Correlation matrix violates A <= -J A^{-1} J (some symplectic eigenvalue < 1).
class InvalidState : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// A - I is not positive definite, so the P-function does not exist.
class NoPRepresentation : public Error {
 public:
  using Error::Error;
};

// Fock truncation loses more trace than the configured cap.
class TruncationTooSmall : public Error {
 public:
  using Error::Error;
};

} // namespace gaussnc
