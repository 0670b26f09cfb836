#pragma once

#include <stdexcept>
#include <string>

namespace gsvd {

/// Base of every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero-sized or mismatched matrix dimensions, or q < m.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A factorization failed (non-positive-definite input, rank deficiency).
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Singular values fell into the dead zone between one/interior/zero, or the
/// class counts disagree with the structural parameters.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a density or distribution function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gamma-function argument at or below a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Permutation enumeration requested above the supported size.
class ComplexityError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Operation is not defined for the regime the dimensions fall into.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Expected Q power does not exist (m + q = n).
class UndefinedExpectationError : public RegimeError {
 public:
  using RegimeError::RegimeError;
};

/// Closed-form evaluation produced a result that violates its own
/// invariants beyond round-off (e.g. a clearly negative density).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A Monte Carlo batch discarded more draws than the failure budget allows.
class BatchAbortedError : public Error {
 public:
  using Error::Error;
};

}  // namespace gsvd
