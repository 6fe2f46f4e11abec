#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idslab {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (size mismatch, non-finite entry, bad parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The tridiagonal QL iteration exceeded its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// The requested energy sits on (or numerically next to) an eigenvalue.
/// `suggested_shift()` is the perturbation the caller should add to the energy before retrying.
class NearEigenvalueError : public Error {
 public:
  NearEigenvalueError(const std::string& what, double suggested_shift)
      : Error(what), suggested_shift_(suggested_shift) {}
  double suggested_shift() const noexcept { return suggested_shift_; }

 private:
  double suggested_shift_;
};

}  // namespace idslab
