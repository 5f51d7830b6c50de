#pragma once

#include <stdexcept>
#include <string>

namespace wb {

// Every precondition breach in the library surfaces as this type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Search exceeded its configured node or size budget. Never a wrong answer.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

}  // namespace wb
