#pragma once

#include <stdexcept>
#include <string>

namespace schedmech {

// Thrown when a computed quantity lands outside a range the math guarantees,
// which means the implementation (not the caller) is at fault.
class internal_error : public std::runtime_error {
 public:
  explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace schedmech
