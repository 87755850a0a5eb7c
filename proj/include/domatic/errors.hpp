#pragma once

#include <stdexcept>
#include <string>

namespace domatic {

/// Malformed or out-of-contract input.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// A configured search / resample / stage budget was exhausted.
struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// A strict inequality could not be decided at the working precision.
struct indeterminate_error : std::runtime_error {
  explicit indeterminate_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace domatic
