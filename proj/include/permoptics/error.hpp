#pragma once

#include <stdexcept>
#include <string>

namespace permoptics {

// Malformed or out-of-domain input. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A size or state-space guard was exceeded. The CLI maps this to exit code 3.
class GuardError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An iterative routine hit its iteration cap.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace permoptics
