#pragma once

#include <stdexcept>
#include <string>

namespace ncvlab {

// Base type for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension outside the configured cap, or a computation that only supports
// small dimensions was asked for a large one.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

// Randomized packing construction ran out of retries before reaching the
// target size.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, std::size_t achieved)
      : Error(what), achieved_size(achieved) {}
  std::size_t achieved_size = 0;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

class BudgetExhaustedError : public Error {
 public:
  using Error::Error;
};

// Reconstruction-set points closer than the bump width c.
class SeparationError : public Error {
 public:
  using Error::Error;
};

class ParameterMismatchError : public Error {
 public:
  using Error::Error;
};

// Two instances passed the uniqueness threshold for the same set; evidence
// against the construction, never swallowed.
class BrokenInvariantError : public Error {
 public:
  using Error::Error;
};

class MissingCoinViewError : public Error {
 public:
  using Error::Error;
};

// Scalar argument outside the domain of a closed-form expression.
class DomainError : public Error {
 public:
  using Error::Error;
};

class MissingManifestError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncvlab
