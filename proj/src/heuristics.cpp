#include "teirp/heuristics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "teirp/random.hpp"

namespace teirp {

namespace {

struct Unit {
  double rate;
  int node;
  int period;
  Quantity ub;
};

double arc_sum(const PricingGraph& g, const std::vector<int>& nodes) {
  double sum = 0.0;
  int prev = 0;
  for (int v : nodes) {
    sum += g.arc[prev][v];
    prev = v;
  }
  return sum + g.arc[prev][0];
}

// Keeps the best columns by value, one per column key.
class Pool {
 public:
  explicit Pool(double tolerance) : tol_(tolerance) {}
  void add(PricedRoute r) {
    if (r.value >= -tol_) return;
    const auto key = column_key(r.column);
    auto it = by_key_.find(key);
    if (it != by_key_.end() && it->second.value <= r.value) return;
    by_key_[key] = std::move(r);
  }
  std::vector<Column> take(int limit) {
    std::vector<PricedRoute*> all;
    for (auto& [key, r] : by_key_) all.push_back(&r);
    std::stable_sort(all.begin(), all.end(), [](auto* a, auto* b) { return a->value < b->value; });
    std::vector<Column> out;
    for (auto* r : all) {
      if (static_cast<int>(out.size()) >= limit) break;
      out.push_back(std::move(r->column));
    }
    return out;
  }

 private:
  double tol_;
  std::map<std::string, PricedRoute> by_key_;
};

}  // namespace

std::optional<PricedRoute> price_route(const Instance& inst, const PricingGraph& g, const DualPrices& duals,
                                       const std::vector<int>& nodes) {
  if (nodes.empty()) return std::nullopt;
  double value = arc_sum(g, nodes);
  if (value == PricingGraph::kNoArc) return std::nullopt;
  const int s = g.satellite, t = g.period, tau = inst.horizon();
  std::vector<Unit> units;
  for (int v : nodes) {
    const int c = g.customers[v - 1];
    const auto& tb = inst.tables(c);
    for (int h : tb.delivery_periods[t]) {
      if (tb.ub[t][h] <= 0) continue;
      const double r = delivery_rate(inst, s, t, c, h, duals);
      if (r < 0) units.push_back({r, v, h, tb.ub[t][h]});
    }
  }
  std::stable_sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) { return a.rate < b.rate; });
  std::map<int, CustomerDelivery> dels;
  for (int v : nodes) dels[v] = CustomerDelivery{g.customers[v - 1], std::vector<Quantity>(tau + 2, 0)};
  Quantity room = inst.second_fleet().capacity;
  for (const auto& u : units) {
    if (room == 0) break;
    const Quantity q = std::min(room, u.ub);
    dels[u.node].q[u.period] = q;
    value += u.rate * static_cast<double>(q);
    room -= q;
  }
  PricedRoute r;
  r.nodes = nodes;
  r.value = value;
  std::vector<int> seq;
  std::vector<CustomerDelivery> per_visit;
  for (int v : nodes) seq.push_back(g.customers[v - 1]);
  for (auto& [v, d] : dels) per_visit.push_back(std::move(d));
  r.column = make_column(inst, s, t, std::move(seq), std::move(per_visit));
  return r;
}

std::vector<Column> tabu_pricer(const Instance& inst, const PricingGraph& g, const DualPrices& duals,
                                const PricingOptions& opts, const TabuOptions& tabu) {
  if (g.disabled || g.size() < 2) return {};
  const int n = g.size();
  Rng rng(tabu.seed);
  Pool pool(opts.tolerance);

  std::optional<PricedRoute> current;
  for (int v = 1; v < n; ++v) {
    auto r = price_route(inst, g, duals, {v});
    if (r && (!current || r->value < current->value)) current = std::move(r);
  }
  if (!current) return {};
  double best = current->value;
  pool.add(*current);
  std::vector<int> tabu_until(n, -1);

  for (int it = 0; it < tabu.iterations; ++it) {
    const auto& cur = current->nodes;
    std::vector<bool> in(n, false);
    for (int v : cur) in[v] = true;
    std::optional<PricedRoute> chosen;
    int ties = 0;
    std::vector<int> moved;
    auto consider = [&](std::vector<int> nodes, std::vector<int> touched) {
      auto r = price_route(inst, g, duals, nodes);
      if (!r) return;
      bool is_tabu = false;
      for (int v : touched) is_tabu = is_tabu || tabu_until[v] > it;
      if (is_tabu && r->value >= best) return;
      if (chosen && r->value > chosen->value) return;
      if (chosen && r->value == chosen->value) {
        // reservoir choice among equal moves
        if (rng.integer(0, ++ties) != 0) return;
      } else {
        ties = 0;
      }
      chosen = std::move(r);
      moved = std::move(touched);
    };
    for (int v = 1; v < n; ++v) {
      if (in[v]) continue;
      for (std::size_t pos = 0; pos <= cur.size(); ++pos) {
        auto nodes = cur;
        nodes.insert(nodes.begin() + static_cast<long>(pos), v);
        consider(std::move(nodes), {v});
      }
    }
    if (cur.size() > 1)
      for (std::size_t pos = 0; pos < cur.size(); ++pos) {
        auto nodes = cur;
        nodes.erase(nodes.begin() + static_cast<long>(pos));
        consider(std::move(nodes), {cur[pos]});
      }
    for (std::size_t a = 0; a < cur.size(); ++a)
      for (std::size_t b = a + 1; b < cur.size(); ++b) {
        auto nodes = cur;
        std::swap(nodes[a], nodes[b]);
        consider(std::move(nodes), {cur[a], cur[b]});
      }
    if (!chosen) break;
    for (int v : moved) tabu_until[v] = it + 1 + tabu.tenure;
    current = std::move(chosen);
    best = std::min(best, current->value);
    pool.add(*current);
  }
  return pool.take(opts.max_columns);
}

std::vector<int> cheapest_round_trips(const Instance& inst, const PricingGraph& g, int k) {
  const Quantity q2 = inst.second_fleet().capacity;
  std::vector<std::pair<double, int>> trips;
  for (int v = 1; v < g.size(); ++v) {
    const double arcs = g.arc[0][v] + g.arc[v][0];
    if (arcs == PricingGraph::kNoArc) continue;
    double pattern = 0.0;
    for (const auto& p : g.cdps[v]) {
      const Quantity amount = p.part() ? std::min(p.max_partial, q2 - p.load) : 0;
      pattern = std::min(pattern, p.cost + p.rate * static_cast<double>(amount));
    }
    trips.emplace_back(arcs + pattern, v);
  }
  std::stable_sort(trips.begin(), trips.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<int> out;
  for (int i = 0; i < std::min<int>(k, static_cast<int>(trips.size())); ++i) out.push_back(trips[i].second);
  return out;
}

PricingGraph induced_graph(const PricingGraph& g, const std::vector<int>& nodes) {
  auto keep = nodes;
  std::sort(keep.begin(), keep.end());
  PricingGraph h;
  h.satellite = g.satellite;
  h.period = g.period;
  h.disabled = g.disabled;
  std::vector<int> map{0};
  for (int v : keep) {
    map.push_back(v);
    h.customers.push_back(g.customers[v - 1]);
  }
  const int n = h.size();
  h.arc.assign(n, std::vector<double>(n, PricingGraph::kNoArc));
  h.ng.assign(n, 0);
  h.cdps.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) h.arc[i][j] = i == j ? PricingGraph::kNoArc : g.arc[map[i]][map[j]];
    if (i == 0) continue;
    for (int j = 1; j < n; ++j)
      if (g.ng[map[i]] >> map[j] & 1) h.ng[i] |= std::uint64_t{1} << j;
    h.cdps[i] = g.cdps[map[i]];
  }
  return h;
}

PricingResult heuristic_labeler_1(const Instance& inst, const PricingGraph& g, const PricingOptions& opts,
                                  int k) {
  if (g.disabled) return {};
  return solve_pricing(inst, induced_graph(g, cheapest_round_trips(inst, g, k)), opts);
}

std::vector<Column> heuristic_labeler_2(const Instance& inst, const PricingGraph& g, const DualPrices& duals,
                                        const PricingOptions& opts) {
  if (g.disabled) return {};
  const int n = g.size();
  const Quantity q2 = inst.second_fleet().capacity;
  Pool pool(opts.tolerance);
  for (int first = 1; first < n; ++first) {
    std::vector<int> nodes;
    std::vector<bool> used(n, false);
    Quantity load = 0;
    int at = 0;
    double cost = 0.0;
    double best = PricingGraph::kNoArc;
    std::vector<int> best_prefix;
    while (true) {
      int next = -1;
      double step = PricingGraph::kNoArc;
      Quantity next_load = 0;
      for (int j = 1; j < n; ++j) {
        if (used[j] || g.arc[at][j] == PricingGraph::kNoArc) continue;
        if (nodes.empty() && j != first) continue;
        for (const auto& p : g.cdps[j]) {
          if (load + p.load > q2) continue;
          const double value = g.arc[at][j] + p.cost;
          if (value < step) step = value, next = j, next_load = p.load;
        }
      }
      if (next < 0) break;
      nodes.push_back(next);
      used[next] = true;
      load += next_load;
      cost += step;
      at = next;
      if (g.arc[at][0] != PricingGraph::kNoArc && cost + g.arc[at][0] < best) {
        best = cost + g.arc[at][0];
        best_prefix = nodes;
      }
    }
    if (best_prefix.empty()) continue;
    if (auto r = price_route(inst, g, duals, best_prefix)) pool.add(std::move(*r));
  }
  return pool.take(opts.max_columns);
}

}  // namespace teirp
