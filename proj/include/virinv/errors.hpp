#pragma once

#include <stdexcept>
#include <string>

namespace virinv {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (eta <= 0, unordered grid, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class OutOfGrid : public Error {
 public:
  using Error::Error;
};

class InconsistentDamping : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class OrderOverflow : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class OutOfBand : public DomainError {
 public:
  using DomainError::DomainError;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Failures of a numerical procedure on otherwise valid input.
class NumericError : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflow : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonFiniteState : public NumericError {
 public:
  using NumericError::NumericError;
};

class ToleranceNotMet : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularityApproached : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceFailure : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateOrder : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace virinv
