#pragma once

#include <stdexcept>
#include <string>

namespace ced {

/// A model parameter or argument violates its precondition (d < 2, lambda <= 0, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact division by zero.
class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

/// Argument outside the domain of a mathematical function (e.g. psi(x) for x > 1/4).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The spread rate lies outside the open interval (lambda_c^-, lambda_c^+),
/// where the critical death rate is identically zero.
class OutsideLambdaInterval : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A simulation would exceed its configured memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ced
