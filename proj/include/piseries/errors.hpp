#pragma once

#include <stdexcept>
#include <string>

namespace piseries {

/// A denominator factor (or harmonic-sum argument) vanished.
class PoleError : public std::domain_error {
 public:
  explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

/// Division by an exact zero in scalar or jet arithmetic.
class DivisionByZero : public std::domain_error {
 public:
  explicit DivisionByZero(const std::string& what) : std::domain_error(what) {}
};

/// Caller supplied an argument outside an operation's domain.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// An infinite product or series could not be brought within tolerance.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace piseries
