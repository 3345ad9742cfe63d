#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "teirp/master.hpp"

namespace teirp {

struct PricingOptions {
  int ng_size = 5;           // kappa; >= |N| gives elementary routes
  double half_point = 0.5;   // share of Q2 for forward labels
  bool bidirectional = true;
  bool dominance = true;
  int max_columns = 50;
  long label_cap = 2000000;
  double tolerance = 1e-6;
};

/// Customer delivery pattern: for each period the customer can be served for,
/// nothing, the full bound, or (for at most one period) a partial amount.
struct Cdp {
  int customer = 0;
  std::vector<Quantity> full;  // [h], full amounts, 0 elsewhere
  int partial_period = -1;
  double cost = 0.0;           // reduced cost of the full sub-deliveries
  Quantity load = 0;           // full quantity
  double rate = 0.0;           // per-unit reduced cost of the partial
  Quantity max_partial = 0;

  bool part() const { return partial_period >= 0; }
};

/// Per-unit reduced cost of serving (c, h) from a delivery in t out of satellite s.
double delivery_rate(const Instance& inst, int s, int t, int c, int h, const DualPrices& duals);

/// All patterns of customer c; `prune` drops partials with rate >= 0 and dominated patterns.
std::vector<Cdp> enumerate_cdps(const Instance& inst, int s, int t, int c, const DualPrices& duals,
                                bool prune = true);

/// Subproblem graph of (s, t). Node 0 is the satellite (source and sink),
/// node k >= 1 is customers[k - 1].
struct PricingGraph {
  int satellite = 0;
  int period = 0;
  bool disabled = false;
  std::vector<int> customers;                // local customer index per node
  std::vector<std::vector<double>> arc;      // reduced arc cost, +inf when absent
  std::vector<std::uint64_t> ng;             // neighbourhood bits per node (by node index)
  std::vector<std::vector<Cdp>> cdps;        // per node

  int size() const { return static_cast<int>(customers.size()) + 1; }
  static constexpr double kNoArc = std::numeric_limits<double>::infinity();
};

PricingGraph build_graph(const Instance& inst, int s, int t, const DualPrices& duals,
                         const std::vector<BranchDecision>& decisions, const PricingOptions& opts);

/// Partial path state. `memory` holds node bits (bit k for node k).
struct Label {
  double cost = 0.0;
  Quantity load = 0;
  std::uint64_t memory = 0;
  bool part = false;
  double rate = 0.0;
  Quantity max_partial = 0;
  int node = 0;
  int pred = -1;
  int cdp = -1;
};

/// Appends node j with pattern `cdp` reached over an arc of reduced cost `arc`.
std::optional<Label> extend(const Label& from, int j, const Cdp& cdp, double arc, std::uint64_t ng_j,
                            Quantity q2);
/// Dominance test between labels of the same node and direction.
bool dominates(const Label& a, const Label& b);

struct PricingResult {
  std::vector<Column> columns;  // reduced cost < -tolerance, best first
  double best = std::numeric_limits<double>::infinity();
  long labels = 0;
  long dominated = 0;
  bool aborted = false;
};

PricingResult solve_pricing(const Instance& inst, const PricingGraph& graph, const PricingOptions& opts);

}  // namespace teirp
