#pragma once

#include <string>
#include <vector>

namespace dfeg::cli {

struct InvariantResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

/// Short runs of the structural invariants (unitarity, projectors, spin and
/// trace conservation, jump constraints, positivity, special-function
/// identities). Each check takes at most a few seconds.
std::vector<InvariantResult> run_invariant_suite();

/// Columns name, value, limit, pass.
std::string invariants_csv(const std::vector<InvariantResult>& results);

}  // namespace dfeg::cli
