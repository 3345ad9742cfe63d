#include "teirp/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace teirp {

namespace {

constexpr long long kUnbounded = 1LL << 40;
constexpr double kMandatory = 1e7;  // per-unit reward on arcs that must be saturated
constexpr double kEps = 1e-9;

// Min-cost flow with lower bounds. Lower bounds and node supplies become
// mandatory arcs from a super source / to a super sink; free supply and free
// disposal are plain arcs. Successive shortest paths (Bellman-Ford queue) stop
// when no negative path remains; the plan is feasible iff every mandatory arc
// is saturated.
class FlowNetwork {
 public:
  int add_node() {
    adj_.emplace_back();
    excess_.push_back(0);
    return static_cast<int>(adj_.size()) - 1;
  }

  int add_arc(int u, int v, long long cap, double cost, long long lower = 0) {
    arcs_.push_back({u, v, lower, cost, push_edge(u, v, cap - lower, cost)});
    excess_[v] += lower;
    excess_[u] -= lower;
    return static_cast<int>(arcs_.size()) - 1;
  }

  void supply(int v, long long amount) { excess_[v] += amount; }
  void free_source(int v) { free_src_.push_back(v); }
  void free_sink(int v) { free_snk_.push_back(v); }

  /// Real cost of the optimum, or nothing when infeasible.
  std::optional<double> solve() {
    const int s = add_node(), t = add_node();
    std::vector<int> mandatory;
    for (int v = 0; v < s; ++v) {
      if (excess_[v] > 0) mandatory.push_back(push_edge(s, v, excess_[v], -kMandatory));
      if (excess_[v] < 0) mandatory.push_back(push_edge(v, t, -excess_[v], -kMandatory));
    }
    for (int v : free_src_) push_edge(s, v, kUnbounded, 0.0);
    for (int v : free_snk_) push_edge(v, t, kUnbounded, 0.0);
    const int n = static_cast<int>(adj_.size());
    std::vector<double> dist(n);
    std::vector<int> via(n);
    std::vector<char> queued(n);
    while (true) {
      std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> q{s};
      dist[s] = 0.0;
      queued.assign(n, 0);
      queued[s] = 1;
      while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        queued[u] = 0;
        for (int e : adj_[u]) {
          const auto& ed = edges_[e];
          if (ed.cap <= 0) continue;
          const double nd = dist[u] + ed.cost;
          if (nd < dist[ed.to] - kEps) {
            dist[ed.to] = nd;
            via[ed.to] = e;
            if (!queued[ed.to]) {
              queued[ed.to] = 1;
              q.push_back(ed.to);
            }
          }
        }
      }
      if (via[t] < 0 || dist[t] >= -kEps) break;
      long long push = kUnbounded;
      for (int v = t; v != s; v = edges_[via[v] ^ 1].to) push = std::min(push, edges_[via[v]].cap);
      for (int v = t; v != s; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].cap -= push;
        edges_[via[v] ^ 1].cap += push;
      }
    }
    for (int e : mandatory)
      if (edges_[e].cap > 0) return std::nullopt;
    double cost = 0.0;
    for (std::size_t a = 0; a < arcs_.size(); ++a) cost += static_cast<double>(flow(static_cast<int>(a))) * arcs_[a].cost;
    return cost;
  }

  long long flow(int arc) const { return arcs_[arc].lower + edges_[arcs_[arc].edge ^ 1].cap; }

 private:
  struct Edge {
    int to;
    long long cap;
    double cost;
  };
  struct Arc {
    int from, to;
    long long lower;
    double cost;
    int edge;
  };

  int push_edge(int u, int v, long long cap, double cost) {
    edges_.push_back({v, cap, cost});
    adj_[u].push_back(static_cast<int>(edges_.size()) - 1);
    edges_.push_back({u, 0, -cost});
    adj_[v].push_back(static_cast<int>(edges_.size()) - 1);
    return static_cast<int>(edges_.size()) - 2;
  }

  std::vector<Edge> edges_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<long long> excess_;
  std::vector<int> free_src_, free_snk_;
};

struct Tour {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> order;  // local indices of the visited items
};

// Cheapest closed tour depot -> items -> depot over every permutation.
Tour best_tour(const Instance& inst, int depot_vertex, unsigned mask, int (Instance::*vertex)(int) const) {
  std::vector<int> items;
  for (int i = 0; mask >> i; ++i)
    if (mask >> i & 1) items.push_back(i);
  Tour best;
  do {
    double c = 0.0;
    int prev = depot_vertex;
    for (int i : items) {
      const int v = (inst.*vertex)(i);
      c += inst.cost(prev, v);
      prev = v;
    }
    c += inst.cost(prev, depot_vertex);
    if (c < best.cost - kEps) best = {c, items};
  } while (std::next_permutation(items.begin(), items.end()));
  return best;
}

struct Block {
  int depot = 0;
  unsigned mask = 0;
};

struct Partition {
  std::vector<Block> blocks;
  double cost = 0.0;
};

// Every split of `mask` into at most `max_blocks` nonempty blocks, each with a depot.
void partitions(unsigned mask, int max_blocks, int depots, const std::vector<std::vector<Tour>>& tours,
                std::vector<Block>& cur, double cost, std::vector<Partition>& out) {
  if (mask == 0) {
    out.push_back({cur, cost});
    return;
  }
  if (static_cast<int>(cur.size()) == max_blocks) return;
  const unsigned low = mask & (~mask + 1);
  const unsigned rest = mask ^ low;
  for (unsigned sub = rest;; sub = (sub - 1) & rest) {
    const unsigned block = sub | low;
    for (int d = 0; d < depots; ++d) {
      cur.push_back({d, block});
      partitions(mask ^ block, max_blocks, depots, tours, cur, cost + tours[d][block].cost, out);
      cur.pop_back();
    }
    if (sub == 0) break;
  }
}

struct PeriodChoice {
  const Partition* second = nullptr;
  const Partition* first = nullptr;
  double cost = 0.0;
};

class Oracle {
 public:
  explicit Oracle(const Instance& inst) : inst_(inst), tau_(inst.horizon()), nn_(inst.num_customers()) {
    const int ns = inst.num_satellites(), nu = inst.num_suppliers();
    const unsigned full_c = (1u << nn_) - 1, full_s = (1u << ns) - 1;
    sat_tours_.assign(ns, std::vector<Tour>(full_c + 1));
    for (int s = 0; s < ns; ++s)
      for (unsigned m = 1; m <= full_c; ++m)
        sat_tours_[s][m] = best_tour(inst, inst.satellite_vertex(s), m, &Instance::customer_vertex);
    sup_tours_.assign(nu, std::vector<Tour>(full_s + 1));
    for (int u = 0; u < nu; ++u)
      for (unsigned m = 1; m <= full_s; ++m)
        sup_tours_[u][m] = best_tour(inst, inst.supplier_vertex(u), m, &Instance::satellite_vertex);

    second_.resize(full_c + 1);
    route_lb_.assign(full_c + 1, std::numeric_limits<double>::infinity());
    for (unsigned m = 0; m <= full_c; ++m) {
      std::vector<Block> cur;
      partitions(m, inst.second_fleet().vehicles, ns, sat_tours_, cur, 0.0, second_[m]);
      for (const auto& p : second_[m]) route_lb_[m] = std::min(route_lb_[m], p.cost);
    }
    min_first_ = std::numeric_limits<double>::infinity();
    for (unsigned m = 0; m <= full_s; ++m) {
      std::vector<Block> cur;
      partitions(m, inst.first_fleet().vehicles, nu, sup_tours_, cur, 0.0, first_);
    }
    for (const auto& p : first_)
      if (!p.blocks.empty()) min_first_ = std::min(min_first_, p.cost);

    Quantity residual = 0, initial = 0;
    for (int c = 0; c < nn_; ++c)
      for (int h = 1; h <= tau_; ++h) residual += inst.residual_demand(c, h);
    for (const auto& s : inst.satellites()) initial += s.initial_inventory;
    need_first_ = residual > initial;

    hold_lb_.assign(nn_, std::vector<std::optional<double>>(1u << tau_));
    for (int c = 0; c < nn_; ++c)
      for (unsigned pat = 0; pat < (1u << tau_); ++pat) hold_lb_[c][pat] = customer_only(c, pat);
  }

  std::optional<OracleResult> run() {
    struct Combo {
      double lb;
      std::vector<unsigned> visits;  // [t - 1]
    };
    std::vector<Combo> combos;
    const unsigned subsets = 1u << nn_;
    std::vector<unsigned> cur(tau_, 0);
    const double first_lb = need_first_ ? min_first_ : 0.0;
    auto rec = [&](auto&& self, int t) -> void {
      if (t == tau_) {
        double lb = first_lb;
        for (int c = 0; c < nn_; ++c) {
          unsigned pat = 0;
          for (int k = 0; k < tau_; ++k)
            if (cur[k] >> c & 1) pat |= 1u << k;
          if (!hold_lb_[c][pat]) return;
          lb += *hold_lb_[c][pat];
        }
        for (int k = 0; k < tau_; ++k) lb += route_lb_[cur[k]];
        if (std::isfinite(lb)) combos.push_back({lb, cur});
        return;
      }
      for (unsigned m = 0; m < subsets; ++m) {
        cur[t] = m;
        self(self, t + 1);
      }
    };
    rec(rec, 0);
    std::stable_sort(combos.begin(), combos.end(), [](const Combo& a, const Combo& b) { return a.lb < b.lb; });

    for (const auto& combo : combos) {
      if (best_ && combo.lb >= best_->objective - kEps) break;
      double hold = 0.0;
      for (int c = 0; c < nn_; ++c) {
        unsigned pat = 0;
        for (int k = 0; k < tau_; ++k)
          if (combo.visits[k] >> c & 1) pat |= 1u << k;
        hold += *hold_lb_[c][pat];
      }
      search(combo.visits, hold);
    }
    if (best_) best_->structures = structures_;
    return best_;
  }

 private:
  // Least customer holding cost when c may only be served in the periods of
  // `pattern`, with unlimited supply; nothing when the demand cannot be met.
  std::optional<double> customer_only(int c, unsigned pattern) const {
    FlowNetwork net;
    const int src = net.add_node(), end = net.add_node();
    net.free_source(src);
    net.free_sink(end);
    add_customer(net, c, end, [&](int t, int in) {
      if (pattern >> (t - 1) & 1) net.add_arc(src, in, kUnbounded, 0.0);
    });
    return net.solve();
  }

  // Customer stock chain; `feed(t, node)` attaches the deliveries of period t.
  template <class Feed>
  void add_customer(FlowNetwork& net, int c, int end, Feed feed) const {
    const auto& cd = inst_.customer(c);
    const auto& tb = inst_.tables(c);
    int carry = -1;
    for (int t = 1; t <= tau_; ++t) {
      const int in = net.add_node(), out = net.add_node();
      if (carry >= 0) net.add_arc(carry, in, kUnbounded, cd.holding_cost);
      net.add_arc(in, out, cd.capacity - tb.residual_inventory[t - 1], 0.0);
      net.supply(out, -tb.residual_demand[t]);
      feed(t, in);
      carry = out;
    }
    net.add_arc(carry, end, kUnbounded, cd.holding_cost);
  }

  void search(const std::vector<unsigned>& visits, double hold_lb) {
    std::vector<std::vector<PeriodChoice>> choices(tau_);
    std::vector<double> rest(tau_ + 1, 0.0);
    for (int t = tau_ - 1; t >= 0; --t) {
      for (const auto& p2 : second_[visits[t]])
        for (const auto& p1 : first_) choices[t].push_back({&p2, &p1, p2.cost + p1.cost});
      std::stable_sort(choices[t].begin(), choices[t].end(),
                       [](const PeriodChoice& a, const PeriodChoice& b) { return a.cost < b.cost; });
      rest[t] = rest[t + 1] + route_lb_[visits[t]];
    }
    std::vector<PeriodChoice> pick(tau_);
    auto rec = [&](auto&& self, int t, double acc, bool used_first) -> void {
      if (t == tau_) {
        ++structures_;
        const auto flow = quantities(pick, visits, tau_);
        if (flow && (!best_ || acc + flow->cost < best_->objective - kEps)) {
          OracleResult res;
          res.objective = acc + flow->cost;
          res.plan = flow->plan;
          res.plan.objective = res.objective;
          best_ = std::move(res);
        }
        return;
      }
      for (const auto& ch : choices[t]) {
        const bool used = used_first || !ch.first->blocks.empty();
        // choices are sorted by cost, so only the plain routing bound may stop the loop
        if (best_ && acc + ch.cost + rest[t + 1] + hold_lb >= best_->objective - kEps) break;
        const double routing = acc + ch.cost + rest[t + 1] + (need_first_ && !used ? min_first_ : 0.0);
        if (best_ && routing + hold_lb >= best_->objective - kEps) continue;
        pick[t] = ch;
        if (t + 1 < tau_) {
          // later periods relaxed: free supply at their visits, free disposal at satellites
          const auto relaxed = quantities(pick, visits, t + 1);
          if (!relaxed || (best_ && routing + relaxed->cost >= best_->objective - kEps)) continue;
        }
        self(self, t + 1, acc + ch.cost, used);
      }
    };
    rec(rec, 0, 0.0, false);
  }

  struct Flow {
    double cost = 0.0;
    Plan plan;
  };

  // Optimal quantities with the structure of periods 1..depth fixed.
  std::optional<Flow> quantities(const std::vector<PeriodChoice>& pick, const std::vector<unsigned>& visits,
                                 int depth) const {
    const int ns = inst_.num_satellites();
    FlowNetwork net;
    const int src = net.add_node(), end = net.add_node();
    net.free_source(src);
    net.free_sink(end);
    // satellites: after-inflow node per period, capacity arc to the shipping node
    std::vector<std::vector<int>> sat_in(ns, std::vector<int>(tau_ + 1)), sat_out = sat_in;
    for (int s = 0; s < ns; ++s) {
      const auto& sd = inst_.satellite(s);
      int carry = -1;
      for (int t = 1; t <= depth; ++t) {
        sat_in[s][t] = net.add_node();
        sat_out[s][t] = net.add_node();
        if (carry >= 0) net.add_arc(carry, sat_in[s][t], kUnbounded, sd.holding_cost);
        else net.supply(sat_in[s][t], sd.initial_inventory);
        net.add_arc(sat_in[s][t], sat_out[s][t], sd.capacity, 0.0);
        carry = sat_out[s][t];
      }
      net.add_arc(carry, end, kUnbounded, depth == tau_ ? sd.holding_cost : 0.0);
    }
    // first echelon: inflow arcs with a unit lower bound per visited satellite
    std::vector<std::vector<int>> inflow_arc(ns, std::vector<int>(tau_ + 1, -1));
    for (int t = 1; t <= depth; ++t)
      for (const auto& b : pick[t - 1].first->blocks) {
        const int veh = net.add_node();
        net.add_arc(src, veh, inst_.first_fleet().capacity, 0.0);
        for (int s = 0; s < ns; ++s)
          if (b.mask >> s & 1) inflow_arc[s][t] = net.add_arc(veh, sat_in[s][t], kUnbounded, 0.0, 1);
      }
    // second echelon: one node per route, one delivery arc per visited customer
    std::vector<std::vector<int>> delivery_arc(nn_, std::vector<int>(tau_ + 1, -1));
    std::vector<std::vector<int>> route_node(tau_ + 1);
    for (int t = 1; t <= depth; ++t)
      for (const auto& b : pick[t - 1].second->blocks) {
        const int r = net.add_node();
        net.add_arc(sat_out[b.depot][t], r, inst_.second_fleet().capacity, 0.0);
        route_node[t].push_back(r);
      }
    for (int c = 0; c < nn_; ++c)
      add_customer(net, c, end, [&](int t, int in) {
        if (t > depth) {
          if (visits[t - 1] >> c & 1) net.add_arc(src, in, kUnbounded, 0.0);
          return;
        }
        const auto& blocks = pick[t - 1].second->blocks;
        for (std::size_t k = 0; k < blocks.size(); ++k)
          if (blocks[k].mask >> c & 1) delivery_arc[c][t] = net.add_arc(route_node[t][k], in, kUnbounded, 0.0);
      });
    const auto cost = net.solve();
    if (!cost) return std::nullopt;
    Flow f{*cost, {}};
    if (depth == tau_) f.plan = build_plan(pick, net, inflow_arc, delivery_arc);
    return f;
  }

  Plan build_plan(const std::vector<PeriodChoice>& pick, const FlowNetwork& net,
                  const std::vector<std::vector<int>>& inflow_arc,
                  const std::vector<std::vector<int>>& delivery_arc) const {
    const int ns = inst_.num_satellites();
    Plan plan;
    for (int t = 1; t <= tau_; ++t)
      for (const auto& b : pick[t - 1].first->blocks) {
        const auto& tour = sup_tours_[b.depot][b.mask];
        FirstEchelonUse u{t, inst_.suppliers()[b.depot].id, {}, tour.cost};
        for (int s : tour.order) u.satellites.push_back(inst_.satellite(s).id);
        plan.first.push_back(std::move(u));
      }
    std::vector<std::vector<std::vector<double>>> split(nn_);
    for (int c = 0; c < nn_; ++c) {
      std::vector<double> delivered(tau_, 0.0);
      for (int t = 1; t <= tau_; ++t)
        if (delivery_arc[c][t] >= 0) delivered[t - 1] = static_cast<double>(net.flow(delivery_arc[c][t]));
      split[c] = fifo_split(inst_.profile(c), delivered);
    }
    std::vector<std::vector<double>> shipped(ns, std::vector<double>(tau_ + 1, 0.0));
    for (int t = 1; t <= tau_; ++t)
      for (const auto& b : pick[t - 1].second->blocks) {
        const auto& tour = sat_tours_[b.depot][b.mask];
        SecondEchelonUse u;
        u.period = t;
        u.satellite = inst_.satellite(b.depot).id;
        u.cost = tour.cost;
        for (int c : tour.order) {
          u.customers.push_back(inst_.customer(c).id);
          DeliveryVector d{inst_.customer(c).id, split[c][t]};
          for (int h = t; h <= tau_ + 1; ++h) {
            u.cost += inst_.customer(c).holding_cost * (h - t) * d.q[h];
            shipped[b.depot][t] += d.q[h];
          }
          u.deliveries.push_back(std::move(d));
        }
        plan.second.push_back(std::move(u));
      }
    // satellite stock flows, first in first out
    for (int s = 0; s < ns; ++s) {
      std::vector<double> lot(tau_ + 1, 0.0);
      lot[0] = static_cast<double>(inst_.satellite(s).initial_inventory);
      std::vector<std::vector<double>> psi(tau_ + 1, std::vector<double>(tau_ + 2, 0.0));
      for (int t = 1; t <= tau_; ++t) {
        if (inflow_arc[s][t] >= 0) lot[t] = static_cast<double>(net.flow(inflow_arc[s][t]));
        double need = shipped[s][t];
        for (int l = 0; l <= t && need > kEps; ++l) {
          const double take = std::min(need, lot[l]);
          lot[l] -= take;
          need -= take;
          psi[l][t] += take;
        }
      }
      for (int l = 0; l <= tau_; ++l) psi[l][tau_ + 1] += lot[l];
      for (int l = 0; l <= tau_; ++l)
        for (int h = std::max(l, 1); h <= tau_ + 1; ++h)
          if (psi[l][h] > kEps) plan.psi.push_back({inst_.satellite(s).id, l, h, psi[l][h]});
    }
    return plan;
  }

  const Instance& inst_;
  int tau_, nn_;
  std::vector<std::vector<Tour>> sat_tours_, sup_tours_;
  std::vector<std::vector<Partition>> second_;  // by visited customer set
  std::vector<Partition> first_;                // every first-echelon choice
  std::vector<double> route_lb_;
  double min_first_ = 0.0;
  bool need_first_ = false;
  std::vector<std::vector<std::optional<double>>> hold_lb_;
  std::optional<OracleResult> best_;
  long structures_ = 0;
};

}  // namespace

std::optional<OracleResult> oracle_solve(const Instance& inst, const OracleLimits& limits) {
  if (inst.num_customers() > limits.customers || inst.horizon() > limits.horizon ||
      inst.num_satellites() > limits.satellites)
    throw InputError(fmt::format("instance too large for the oracle ({} customers, {} periods, {} satellites)",
                                 inst.num_customers(), inst.horizon(), inst.num_satellites()));
  return Oracle(inst).run();
}

}  // namespace teirp
