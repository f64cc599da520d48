#pragma once

#include <stdexcept>
#include <string>

namespace fairtree {

// Single error type for all contract violations (bad input data, bad config,
// malformed files). The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fairtree
