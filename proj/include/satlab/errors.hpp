#pragma once

#include <stdexcept>
#include <string>

namespace satlab {

/// Thrown when a computation leaves the numerically meaningful regime
/// (state blow-up, non-contractive fixed-point iteration, ...). Distinct
/// from std::invalid_argument, which signals contract violations.
class numeric_failure : public std::runtime_error {
 public:
  explicit numeric_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace satlab
