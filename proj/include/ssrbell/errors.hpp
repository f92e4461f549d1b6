#pragma once

#include <stdexcept>

namespace ssrbell {

// A projection whose probability is numerically zero cannot be renormalized.
struct ZeroProjectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The squeezing parameter is undefined when the mean-spin denominator vanishes.
struct UndefinedSqueezingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ssrbell
