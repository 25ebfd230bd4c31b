#pragma once

#include <stdexcept>
#include <string>

namespace hitchin {

/// Raised when an operation's preconditions are violated (bad grid parameters,
/// arity mismatches, incompatible boundary conditions, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by numerical kernels that cannot produce a meaningful result
/// (singular linear systems, non-finite intermediates).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failures while reading configs or writing reports.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hitchin
