#pragma once

#include <stdexcept>
#include <string>

namespace trpapr {

/// Raised when caller-supplied arguments violate an operation's preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a quantity is mathematically undefined for the given input
/// (e.g. the PAPR of an all-zero signal).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an exhaustive enumeration would exceed its configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trpapr
