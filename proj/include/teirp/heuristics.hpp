#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "teirp/pricing.hpp"

namespace teirp {

/// A route of a pricing graph (node indices, no depot) with its best delivery
/// pattern and reduced cost.
struct PricedRoute {
  std::vector<int> nodes;
  double value = 0.0;
  Column column;
};

/// Best extreme delivery pattern for a fixed elementary route: fractional
/// knapsack over the per-unit rates. Returns nothing when an arc is missing.
std::optional<PricedRoute> price_route(const Instance& inst, const PricingGraph& g, const DualPrices& duals,
                                       const std::vector<int>& nodes);

struct TabuOptions {
  int tenure = 7;
  int iterations = 100;
  std::uint64_t seed = 1;
};

/// Tabu search over elementary routes with insert, remove and swap moves.
std::vector<Column> tabu_pricer(const Instance& inst, const PricingGraph& g, const DualPrices& duals,
                                const PricingOptions& opts, const TabuOptions& tabu = {});

/// Nodes of the k customers with the cheapest round trip (best pattern), ascending.
std::vector<int> cheapest_round_trips(const Instance& inst, const PricingGraph& g, int k);

/// Subgraph induced by the given nodes (ascending order is kept).
PricingGraph induced_graph(const PricingGraph& g, const std::vector<int>& nodes);

/// Exact labeling on the k customers with the cheapest round trips.
PricingResult heuristic_labeler_1(const Instance& inst, const PricingGraph& g, const PricingOptions& opts,
                                  int k = 5);

/// Greedy chains: from each first customer, repeatedly take the single
/// cheapest extension (partial deliveries ignored), then re-optimize the
/// delivery pattern of the best prefix.
std::vector<Column> heuristic_labeler_2(const Instance& inst, const PricingGraph& g, const DualPrices& duals,
                                        const PricingOptions& opts);

}  // namespace teirp
