#pragma once

#include <stdexcept>

namespace dpbinom {

// Input outside an operation's documented domain.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A root search failed to bracket or converge.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dpbinom
