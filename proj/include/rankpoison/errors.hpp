// This file is part of rankpoison, a toolkit for studying data poisoning
// against pairwise rank aggregation. MIT License; see LICENSE.

#pragma once

#include <stdexcept>
#include <string>

namespace rankpoison {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// edge_index called with i == j or an out-of-range candidate.
class InvalidEdgeError : public Error {
 public:
  using Error::Error;
};

// A voter judgment matrix is not skew-symmetric or has entries outside
// {-1, 0, 1}.
class MalformedVoteError : public Error {
 public:
  using Error::Error;
};

// Vector or matrix sizes do not match the dataset.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// The degree scale handed to transition_matrix is too small: some row's
// off-diagonal transition mass would exceed 1.
class InvalidScaleError : public Error {
 public:
  using Error::Error;
};

// integerize_weights received an all-zero weight vector.
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

// Rounding at the requested total changed the aggregation's top candidate;
// the caller should retry with a finer total.
class ResolutionTooCoarseError : public Error {
 public:
  using Error::Error;
};

// The comparison chain is reducible, so its stationary distribution is not
// unique.
class NonUniqueStationaryError : public Error {
 public:
  using Error::Error;
};

// A score vector handed to a spectral construction is not a strictly
// positive probability vector.
class InvalidDistributionError : public Error {
 public:
  using Error::Error;
};

// Fewer than two candidates.
class InvalidSizeError : public Error {
 public:
  using Error::Error;
};

// An iterative solver ran out of iterations. Carries the last residual so
// callers can report how close the run got.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double residual, long iterations)
      : Error(what), residual(residual), iterations(iterations) {}
  double residual;
  long iterations;
};

// The attack residual plateaued well above tolerance: no nonnegative weight
// vector appears to satisfy the target constraints.
class InfeasibleTargetError : public NoConvergenceError {
 public:
  using NoConvergenceError::NoConvergenceError;
};

// Malformed input file; message includes the offending line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A strategy or scenario is missing a required parameter.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rankpoison
