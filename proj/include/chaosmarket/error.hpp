#pragma once

#include <stdexcept>
#include <string>

namespace chaosmarket {

// Invalid model or algorithm parameter (w <= 0, m >= n, bad window ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Bad input data: non-finite values, non-positive prices.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A closed-form expression evaluated outside its domain of validity.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Numerical procedure failed (eigensolver, insufficient data for a fit ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chaosmarket
