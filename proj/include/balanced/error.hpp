#pragma once

#include <stdexcept>

namespace balanced {

/// Raised when a numerical procedure (Newton, root finding, integration)
/// fails to produce a result meeting its contract. Precondition violations
/// use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace balanced
