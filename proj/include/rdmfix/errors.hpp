#pragma once

#include <stdexcept>
#include <string>

namespace rdmfix {

// Shape or size of an input does not match what the operation expects.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A scalar argument lies outside the domain of the operation (negative trace, N < 2, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// The underlying numerical routine failed (eigensolver, linear solve).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rdmfix
