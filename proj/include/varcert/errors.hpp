#pragma once

#include <stdexcept>
#include <string>

namespace varcert {

/// A hypothesis of a criterion does not hold (e.g. p(x) <= 0, a boundary
/// value that should vanish does not). The CLI reports these with exit 3.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Strengthened Legendre condition violated: f_zz <= 0 somewhere on the grid.
class LegendreViolation : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class BoundaryConditionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Numerical integration produced a non-finite state.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace varcert
