#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "teirp/heuristics.hpp"
#include "teirp/master.hpp"
#include "teirp/pricing.hpp"

namespace teirp {

struct ColgenOptions {
  PricingOptions pricing;
  TabuOptions tabu;
  bool heuristics = true;
  int threads = 1;
  long max_iterations = 10000;
  double tolerance = 1e-6;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class ColgenStatus { kConverged, kInfeasible, kIterationLimit, kTimeout, kLpFailure };

const char* to_string(ColgenStatus s);

struct ColgenStats {
  ColgenStatus status = ColgenStatus::kConverged;
  double objective = 0.0;
  long iterations = 0;
  long columns_added = 0;
  long exact_rounds = 0;
  long heuristic_rounds = 0;
  long aborted_subproblems = 0;  // exact runs stopped by the label cap
  std::vector<std::string> trace;  // "iter, lp_obj, n_cols, n_new, pricing_mode"
};

/// Per-subproblem pricing state that outlives a single node: once heuristic
/// labeler 1 fails for (s, t), labeler 2 is used from then on.
struct PricingMemory {
  std::vector<std::vector<bool>> use_labeler_1;  // [s][t]
};

/// Column generation on the master's current node. Pricing runs in parallel
/// over (s, t); new columns are merged in (s, t) order.
ColgenStats run_column_generation(Master& master, const ColgenOptions& opts, PricingMemory* memory = nullptr);

}  // namespace teirp
