#pragma once

#include <stdexcept>
#include <string>

namespace tribound {

// Trajectory arithmetic would leave the checked integer range.
struct ArithmeticOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A forward trajectory did not resolve within the caller-supplied step budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Elimination exceeded its configured split cap.
struct IterationLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Certification failed at the configured maximum precision.
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The bound target lies in the known cycle {1, 2}.
struct CycleTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedTree : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingVariable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tribound
