#pragma once

#include <stdexcept>
#include <string>

namespace knotcert {

// A documented precondition of an operation does not hold for the given input.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// An enumeration would exceed the configured item cap.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace knotcert
