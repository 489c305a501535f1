#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gosc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An iteration ran out of budget. `trace` holds the decimal rendering of
/// the iterates (or ladder values) seen so far, last entry = last iterate.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, std::vector<std::string> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<std::string>& trace() const { return trace_; }
  const std::string& last_iterate() const {
    static const std::string empty;
    return trace_.empty() ? empty : trace_.back();
  }

 private:
  std::vector<std::string> trace_;
};

class SingularDerivative : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// The requested computation needs more working precision than supplied.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A root finder converged to a root belonging to a different state or
/// left the admissible region.
class BranchLoss : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace gosc
