#pragma once

#include <stdexcept>
#include <string>

namespace tetherplan {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyWorldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's input contract (bad endpoints, colliding curve, ...).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Oracle enumeration hit its node cap.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tetherplan
