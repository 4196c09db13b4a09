#pragma once

#include <stdexcept>
#include <string>

namespace qmclab {

// Malformed configuration input (file or flags). CLI maps this to exit 2.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Experiment cannot be run as requested (budget too small, span too short,
// degenerate inputs). CLI maps this to exit 3.
class infeasible_error : public std::runtime_error {
  public:
    explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qmclab
