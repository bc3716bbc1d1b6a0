#pragma once

#include <stdexcept>
#include <string>

namespace rsphoton {

/// Precondition violations on user-supplied parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every lattice mode was excluded by the kappa ball.
class EmptyGridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spectral multiplier was requested at omega = 0 (or on a mode without a helicity basis).
class SingularModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Leapfrog step exceeds the stability bound for the grid.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ratio requested for a state with zero photon number.
class UndefinedRatioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rsphoton
