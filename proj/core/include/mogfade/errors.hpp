#pragma once

#include <stdexcept>
#include <string>

namespace mogfade {

/// Base class for numerical failures that are not argument errors.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series or iteration hit its term/iteration cap before meeting tolerance.
class NonConvergenceError : public NumericError {
 public:
  NonConvergenceError(const std::string& what, double estimate, double error_estimate)
      : NumericError(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// A series was asked to run outside its region of convergence.
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Input data cannot support the requested fit (e.g. too few distinct values).
class DegenerateDataError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace mogfade
