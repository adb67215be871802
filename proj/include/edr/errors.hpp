#pragma once

#include <stdexcept>
#include <string>

namespace edr {

// User-supplied values that cannot be processed: unknown names,
// out-of-range parameters, incompatible dimensions.
struct InvalidInput : std::invalid_argument {
  explicit InvalidInput(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical invariant failed: non-Hermitian input where a Hermitian matrix
// is required, a variance below tolerance, an inconsistent estimate.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace edr
