#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "teirp/colgen.hpp"
#include "teirp/master.hpp"
#include "teirp/solution.hpp"

namespace teirp {

enum class SearchMode { kBestFirst, kLocalDepthFirst };

struct BnpOptions {
  ColgenOptions colgen;
  SearchMode search = SearchMode::kBestFirst;
  double time_limit = 3600.0;      // seconds
  long node_limit = 1000000;
  double integer_rmp_seconds = 30.0;  // safety net; the node budget keeps runs reproducible
  long integer_rmp_nodes = 500;
  int integer_rmp_after = 20;      // solved nodes before the second integer-RMP call
  double prune_tolerance = 1e-6;
  double optimal_gap = 5e-4;       // 0.05%
};

/// Value of every branching family at an LP solution, one candidate per
/// (family, index).
struct BranchCandidate {
  BranchDecision decision;  // sense/rhs unset
  double value = 0.0;
};

std::vector<BranchCandidate> branch_candidates(const Master& master);

/// Selection rule: type 1, then the first-echelon candidate closest to 0.5;
/// otherwise the per-type best of 5..10 with priority 7 > 8 > 9 > 10 inside
/// [0.25, 0.75], else the overall closest to 0.5. Empty when integral.
std::optional<BranchCandidate> select_branch(const std::vector<BranchCandidate>& candidates,
                                             double tolerance = 1e-6);

/// (ub - lb) / lb; nothing when either bound is missing or lb is not positive
/// while the bounds differ.
std::optional<double> relative_gap(std::optional<double> lb, std::optional<double> ub);

struct SolveReport {
  std::string status;  // optimal | timeout | node_limit | no_solution | infeasible
  std::optional<double> objective;
  std::optional<double> lb;
  std::optional<double> ub;
  std::optional<double> gap0;
  std::optional<double> gap20;
  std::optional<double> gap_f;
  long nodes = 0;
  double time_root = 0.0;
  double time_total = 0.0;
  double root_bound = 0.0;
  std::optional<Plan> solution;
};

/// Serializes a report; `timing` false writes null times so runs compare byte for byte.
nlohmann::json report_to_json(const SolveReport& r, bool timing = true);

SolveReport branch_and_price(const Instance& inst, const BnpOptions& opts = {});

/// Plan of the current (integral) master solution.
Plan plan_from_master(const Master& master);
/// Plan of an integer-RMP solution.
Plan plan_from_integer(const Master& master, const IntegerSolution& sol);

}  // namespace teirp
