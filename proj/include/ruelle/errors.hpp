#pragma once

#include <stdexcept>
#include <string>

namespace ruelle {

// Error taxonomy mirroring the CLI exit codes:
//   0 success, 2 input error, 3 precondition violation,
//   4 hypothesis violation, 5 residual/numerical failure.
// Specific failure kinds (NonUnimodular, NotAcyclic, GammaPole, ...) are
// carried in the message prefix so callers and tests can match on them.

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 2;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 3;
};

struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 4;
};

struct ResidualError : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 5;
};

}  // namespace ruelle
