#pragma once

#include <stdexcept>
#include <string>

namespace stepflow {

// Bad user-facing input: invalid material, malformed grid, non-zero-mean field.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Hessian requested at p = 0, where it is unbounded in the limit.
class SingularPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The explicit part of a time step produced non-finite values, or the
// adaptive controller ran out of halvings.
class StepRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stepflow
