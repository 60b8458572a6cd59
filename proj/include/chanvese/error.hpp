#pragma once

#include <stdexcept>
#include <string>

namespace chanvese {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// The file was readable but its encoding is not supported.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Grid dimensions are too small or do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is out of its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Time step exceeds the explicit-scheme stability bound.
class CflError : public ParameterError {
 public:
  CflError(double tau, double max_tau);

  double tau() const noexcept { return tau_; }
  double max_tau() const noexcept { return max_tau_; }

 private:
  double tau_;
  double max_tau_;
};

/// Input is valid but degenerate (all-zero image, single-region mask, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// The evolution produced a non-finite value.
class NumericalInstabilityError : public Error {
 public:
  NumericalInstabilityError(int iteration, int x, int y);

  /// 1-based iteration at which the failure occurred, 0 when unknown.
  int iteration() const noexcept { return iteration_; }
  int x() const noexcept { return x_; }
  int y() const noexcept { return y_; }

 private:
  int iteration_;
  int x_;
  int y_;
};

}  // namespace chanvese
