#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsepot {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the supported domain (precondition violation, NaN input,
/// unsupported Bessel order/argument pair, malformed region, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation refused because kR is too close to a pole of cot/tan.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double distance)
      : Error(what), distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

/// An iterative solver did not converge. Carries the iterate trace.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what,
                   std::vector<std::complex<double>> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<std::complex<double>>& trace() const noexcept {
    return trace_;
  }
  std::complex<double> last_iterate() const {
    return trace_.empty() ? std::complex<double>{} : trace_.back();
  }

 private:
  std::vector<std::complex<double>> trace_;
};

/// A converged zero sits on the unphysical sheet (Im chi <= 0).
class SheetError : public Error {
 public:
  using Error::Error;
};

/// Argument-principle failure: suspected zero on the contour, or the
/// winding integral would not settle to an integer.
class ContourError : public Error {
 public:
  using Error::Error;
};

/// Malformed potential or target file. `index` names the offending entry,
/// or is -1 when the problem is structural.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, long index)
      : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

/// Failure while building the bump for one entry of a target sequence.
class TargetError : public Error {
 public:
  TargetError(const std::string& what, long index) : Error(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

}  // namespace sparsepot
