#pragma once

#include <stdexcept>
#include <string>

namespace reachnav {

// Bad input: malformed config, out-of-range parameters, shape mismatches.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Query outside the domain of a grid or map.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Numerical failure: non-convergence or an infeasible problem.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public NumericalError {
 public:
  NonConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace reachnav
