#pragma once

#include <cstdint>
#include <vector>

#include "teirp/instance.hpp"

namespace teirp {

struct FirstEchelonRoute {
  int supplier = 0;             // local supplier index
  std::vector<int> satellites;  // local satellite indices in visit order
  std::uint32_t mask = 0;       // bit s set when satellite s is visited
  double cost = 0.0;

  bool visits(int s) const { return (mask >> s) & 1u; }
};

/// One cheapest closed tour per nonempty satellite subset, ordered by mask.
/// Ties between suppliers go to the lower supplier id.
std::vector<FirstEchelonRoute> enumerate_first_echelon(const Instance& inst);

/// Exact min-cost tour from `from` through all `stops` and back (Held-Karp).
/// Returns the cost and the visit order.
double shortest_tour(const Instance& inst, int from_vertex, const std::vector<int>& stop_vertices,
                     std::vector<int>* order = nullptr);

}  // namespace teirp
