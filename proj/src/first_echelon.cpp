#include "teirp/first_echelon.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

namespace teirp {

double shortest_tour(const Instance& inst, int from, const std::vector<int>& stops,
                     std::vector<int>* order) {
  const int n = static_cast<int>(stops.size());
  if (n == 0) {
    if (order) order->clear();
    return 0.0;
  }
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t full = std::size_t{1} << n;
  // dp[mask][j]: cheapest path from `from` covering mask and ending at stop j
  std::vector<double> dp(full * n, inf);
  std::vector<int> parent(full * n, -1);
  for (int j = 0; j < n; ++j) dp[(std::size_t{1} << j) * n + j] = inst.cost(from, stops[j]);
  for (std::size_t mask = 1; mask < full; ++mask)
    for (int j = 0; j < n; ++j) {
      const double base = dp[mask * n + j];
      if (!((mask >> j) & 1) || base == inf) continue;
      for (int k = 0; k < n; ++k) {
        if ((mask >> k) & 1) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double c = base + inst.cost(stops[j], stops[k]);
        if (c < dp[next * n + k]) {
          dp[next * n + k] = c;
          parent[next * n + k] = j;
        }
      }
    }
  double best = inf;
  int last = -1;
  for (int j = 0; j < n; ++j) {
    const double c = dp[(full - 1) * n + j] + inst.cost(stops[j], from);
    if (c < best - 1e-12) best = c, last = j;
  }
  if (order) {
    order->clear();
    std::size_t mask = full - 1;
    for (int j = last; j >= 0;) {
      order->push_back(stops[j]);
      const int p = parent[mask * n + j];
      mask &= ~(std::size_t{1} << j);
      j = p;
    }
    std::reverse(order->begin(), order->end());
    // canonical direction: the reversed tour has the same cost
    if (order->size() > 1 && order->front() > order->back())
      std::reverse(order->begin(), order->end());
  }
  return best;
}

std::vector<FirstEchelonRoute> enumerate_first_echelon(const Instance& inst) {
  const int ns = inst.num_satellites();
  if (ns > 20) throw InputError(fmt::format("{} satellites are too many to enumerate", ns));
  std::vector<FirstEchelonRoute> out;
  for (std::uint32_t mask = 1; mask < (1u << ns); ++mask) {
    std::vector<int> stops;
    for (int s = 0; s < ns; ++s)
      if ((mask >> s) & 1u) stops.push_back(inst.satellite_vertex(s));
    FirstEchelonRoute best;
    best.cost = std::numeric_limits<double>::infinity();
    std::vector<int> ord;
    // suppliers in id order so ties keep the lowest id
    std::vector<int> by_id(inst.num_suppliers());
    for (int u = 0; u < inst.num_suppliers(); ++u) by_id[u] = u;
    std::sort(by_id.begin(), by_id.end(), [&](int a, int b) {
      return inst.suppliers()[a].id < inst.suppliers()[b].id;
    });
    for (int u : by_id) {
      const double c = shortest_tour(inst, inst.supplier_vertex(u), stops, &ord);
      if (c < best.cost - 1e-9) {
        best.cost = c;
        best.supplier = u;
        best.satellites.clear();
        for (int v : ord) best.satellites.push_back(v - inst.num_suppliers());
      }
    }
    best.mask = mask;
    out.push_back(std::move(best));
  }
  return out;
}

}  // namespace teirp
