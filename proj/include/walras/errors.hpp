#pragma once

#include <stdexcept>
#include <string>

namespace walras {

/// Malformed market document, price argument, or other caller input.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A grid search or enumeration would exceed its configured evaluation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Price iteration ran out of steps before reaching a fixed point.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace walras
