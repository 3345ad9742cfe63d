#pragma once

// Brute-force column universe: elementary routes x extreme delivery patterns.

#include <algorithm>
#include <limits>
#include <vector>

#include "teirp/first_echelon.hpp"
#include "teirp/master.hpp"

namespace teirp::testing {

struct Pair {
  int customer;
  int period;
  Quantity ub;
};

inline std::vector<Pair> delivery_pairs(const Instance& inst, const std::vector<int>& customers, int t) {
  std::vector<Pair> out;
  for (int c : customers) {
    const auto& tb = inst.tables(c);
    for (int h : tb.delivery_periods[t])
      if (tb.ub[t][h] > 0) out.push_back({c, h, tb.ub[t][h]});
  }
  return out;
}

/// Every extreme point of {0 <= q <= UB, sum q <= Q2} over the given pairs, as
/// vectors of per-pair quantities.
inline std::vector<std::vector<Quantity>> extreme_patterns(const std::vector<Pair>& pairs, Quantity q2) {
  std::vector<std::vector<Quantity>> out;
  std::vector<Quantity> cur(pairs.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, Quantity load) -> void {
    if (i == pairs.size()) {
      out.push_back(cur);
      const Quantity room = q2 - load;
      if (room <= 0) return;
      for (std::size_t j = 0; j < pairs.size(); ++j)
        if (cur[j] == 0 && pairs[j].ub > room) {
          cur[j] = room;
          out.push_back(cur);
          cur[j] = 0;
        }
      return;
    }
    self(self, i + 1, load);
    if (load + pairs[i].ub <= q2) {
      cur[i] = pairs[i].ub;
      self(self, i + 1, load + pairs[i].ub);
      cur[i] = 0;
    }
  };
  rec(rec, 0, 0);
  return out;
}

inline Column pattern_column(const Instance& inst, int s, int t, const std::vector<int>& seq,
                             const std::vector<Pair>& pairs, const std::vector<Quantity>& q) {
  std::vector<CustomerDelivery> dels;
  for (int c : seq) dels.push_back({c, std::vector<Quantity>(inst.horizon() + 2, 0)});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto it = std::find(seq.begin(), seq.end(), pairs[i].customer);
    dels[it - seq.begin()].q[pairs[i].period] += q[i];
  }
  return make_column(inst, s, t, seq, dels);
}

/// LP-relevant universe: per (s, t) and customer subset, the cheapest tour with
/// every extreme pattern that gives each visited customer a positive quantity.
inline std::vector<Column> full_universe(const Instance& inst) {
  std::vector<Column> out;
  const int n = inst.num_customers();
  for (int s = 0; s < inst.num_satellites(); ++s)
    for (int t = 1; t <= inst.horizon(); ++t)
      for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> stops;
        for (int c = 0; c < n; ++c)
          if (mask >> c & 1) stops.push_back(inst.customer_vertex(c));
        std::vector<int> order;
        shortest_tour(inst, inst.satellite_vertex(s), stops, &order);
        std::vector<int> seq;
        for (int v : order) seq.push_back(v - inst.customer_vertex(0));
        const auto pairs = delivery_pairs(inst, seq, t);
        for (const auto& q : extreme_patterns(pairs, inst.second_fleet().capacity)) {
          bool all_positive = true;
          for (int c : seq) {
            Quantity got = 0;
            for (std::size_t i = 0; i < pairs.size(); ++i)
              if (pairs[i].customer == c) got += q[i];
            all_positive = all_positive && got > 0;
          }
          if (all_positive) out.push_back(pattern_column(inst, s, t, seq, pairs, q));
        }
      }
  return out;
}

/// Minimum reduced cost over all elementary routes of (s, t) and all delivery
/// patterns, by permutation enumeration and a fractional knapsack per route.
/// Customers rejected by `allowed` are never visited.
template <class Allowed>
double min_reduced_cost(const Instance& inst, int s, int t, const DualPrices& duals,
                        const std::vector<BranchDecision>& decisions, Allowed allowed,
                        Column* best_column = nullptr) {
  const int n = inst.num_customers();
  const Quantity q2 = inst.second_fleet().capacity;
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> seq;
    bool ok = true;
    for (int c = 0; c < n; ++c)
      if (mask >> c & 1) {
        ok = ok && allowed(c);
        seq.push_back(c);
      }
    if (!ok) continue;
    const auto pairs = delivery_pairs(inst, seq, t);
    do {
      if (seq.size() > 1 && seq.front() > seq.back()) continue;
      const std::vector<Quantity> zero(pairs.size(), 0);
      const Column empty = pattern_column(inst, s, t, seq, pairs, zero);
      const double base = reduced_cost(inst, empty, duals, decisions);
      // marginal value of each pair, read off the reduced cost (linear in q)
      std::vector<std::pair<double, std::size_t>> rho;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto unit = zero;
        unit[i] = 1;
        const Column one = pattern_column(inst, s, t, seq, pairs, unit);
        const double r = reduced_cost(inst, one, duals, decisions) - base;
        if (r < 0) rho.emplace_back(r, i);
      }
      std::sort(rho.begin(), rho.end());
      double rc = base;
      Quantity room = q2;
      std::vector<Quantity> q(pairs.size(), 0);
      for (auto [r, i] : rho) {
        if (room == 0) break;
        const Quantity take = std::min(room, pairs[i].ub);
        q[i] = take;
        rc += r * static_cast<double>(take);
        room -= take;
      }
      if (rc < best) {
        best = rc;
        if (best_column) *best_column = pattern_column(inst, s, t, seq, pairs, q);
      }
    } while (std::next_permutation(seq.begin(), seq.end()));
  }
  return best;
}

}  // namespace teirp::testing
