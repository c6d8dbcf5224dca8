#pragma once

#include <stdexcept>
#include <string>

namespace besovlab {

// Bad user-supplied values: grid sizes, norm indices, malformed configs.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A constructed object failed one of its own checks (e.g. the dyadic
// partition does not sum to one within tolerance on this lattice).
struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The symmetrized density left the admissible range, so the change of
// variables back to (n, u) is no longer defined.
struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace besovlab
