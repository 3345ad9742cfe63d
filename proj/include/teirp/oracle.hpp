#pragma once

#include <optional>

#include "teirp/instance.hpp"
#include "teirp/solution.hpp"

namespace teirp {

struct OracleLimits {
  int customers = 5;
  int horizon = 3;
  int satellites = 2;
};

struct OracleResult {
  double objective = 0.0;
  Plan plan;
  long structures = 0;  // complete structures whose quantities were optimised
};

/// Exhaustive optimum of a tiny instance, built on the instance model only.
/// Every per-period visit set, route partition and first-echelon choice is
/// enumerated (with cost bounds); quantities of each structure are set by a
/// min-cost flow. Returns nothing when the instance has no feasible plan.
/// Throws InputError above the limits.
std::optional<OracleResult> oracle_solve(const Instance& inst, const OracleLimits& limits = {});

}  // namespace teirp
