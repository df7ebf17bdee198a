#pragma once

#include <stdexcept>
#include <string>

namespace rllink {

// Bad or inconsistent user input (malformed sequences, out-of-range
// probabilities, rate above capacity, ...). CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A request that is well-formed but has no answer in the requested model
// (e.g. target rate exceeding capacity). CLI maps this to exit code 1.
class InfeasibleError : public std::runtime_error {
  public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Internal numeric failure (non-convergence, singular system where one was
// not expected). CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rllink
