#pragma once

#include <stdexcept>
#include <string>

namespace fluxlattice {

/// Invalid user input: bad config, malformed data file, unknown name.
/// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
  public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-convergence, divergent fit, broken precondition
/// detected mid-computation. The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fluxlattice
