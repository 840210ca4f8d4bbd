#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace liouville {

// Bad input: malformed spec files, out-of-range parameters, precondition
// violations the caller could have checked. CLI maps this to exit code 2.
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A verification the tool performed came out negative (inequality violated,
// golden mismatch, residual too large to certify). CLI exit code 1.
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear algebra gave up: singular or ill-conditioned system.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what,
                       double cond = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), condition_estimate(cond) {}
  double condition_estimate;
};

}  // namespace liouville
