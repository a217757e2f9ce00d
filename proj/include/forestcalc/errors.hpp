#pragma once

#include <stdexcept>
#include <string>

namespace forestcalc {

/// Input violates a documented precondition (bad link, weight out of range, ...).
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A request exceeds a configured enumeration or integration bound.
class SizeLimitError : public std::length_error {
public:
  using std::length_error::length_error;
};

/// An exact identity that must hold came out with a nonzero residual.
class IdentityFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A checked inequality was violated; the message carries the witness.
class InequalityFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numeric quadrature or fitting did not reach the requested accuracy.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace forestcalc
