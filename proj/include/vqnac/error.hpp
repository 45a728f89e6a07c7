#pragma once

#include <stdexcept>
#include <string>

namespace vqnac {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied arguments that violate an operation's preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// Malformed Hamiltonian, circuit, table, or config file. The message carries
// the path and the offending field.
class LoadError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A projective-measurement branch whose probability is below the floor.
class DegenerateBranchError : public Error {
 public:
  DegenerateBranchError(const std::string& what, double probability)
      : Error(what), probability_(probability) {}
  double probability() const { return probability_; }

 private:
  double probability_;
};

// Energy gap below the floor used as a denominator.
class NearDegeneracyError : public Error {
 public:
  NearDegeneracyError(const std::string& what, double gap) : Error(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

// Optimizer abort, non-PSD Hessian, energy-conservation violation, ...
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The exact-diagonalization reference cannot produce a trustworthy value.
class OracleInvalid : public Error {
 public:
  using Error::Error;
};

// Endpoint states of a loop are not the same ray.
class GaugeMismatchError : public Error {
 public:
  using Error::Error;
};

// Finite-difference step outside the window where the error budget is positive.
class StepTooLargeError : public InputError {
 public:
  using InputError::InputError;
};

// Consecutive loop states (nearly) orthogonal.
class DiscretizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqnac
