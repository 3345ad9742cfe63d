#pragma once

// Compact arc-flow model of the two-echelon problem, built directly from the
// instance data with aggregate per-period deliveries and inventory balances.
// Its LP relaxation is the reference the column formulation is compared to.

#include <algorithm>
#include <optional>
#include <vector>

#include "teirp/instance.hpp"
#include "teirp/lp.hpp"

namespace teirp::testing {

class ModelBuilder {
 public:
  int var(double cost, double lower, double upper) {
    vars_.push_back({cost, lower, upper, {}});
    return static_cast<int>(vars_.size()) - 1;
  }
  void row(lp::Sense sense, double rhs, const std::vector<std::pair<int, double>>& terms) {
    const int r = static_cast<int>(rows_.size());
    rows_.push_back({sense, rhs});
    for (auto [v, a] : terms)
      if (a != 0.0) vars_[v].entries.push_back({r, a});
  }
  lp::LinearProgram build() const {
    lp::LinearProgram lp;
    for (const auto& r : rows_) lp.add_row(r.first, r.second);
    for (const auto& v : vars_) lp.add_column(v.cost, v.lower, v.upper, v.entries);
    return lp;
  }

 private:
  struct Var {
    double cost, lower, upper;
    std::vector<lp::Entry> entries;
  };
  std::vector<Var> vars_;
  std::vector<std::pair<lp::Sense, double>> rows_;
};

/// LP bound of the compact model; nothing when its relaxation is infeasible.
inline std::optional<double> arc_flow_bound(const Instance& inst) {
  using lp::Sense;
  const int tau = inst.horizon(), nu = inst.num_suppliers(), ns = inst.num_satellites(),
            nn = inst.num_customers();
  const double q1 = static_cast<double>(inst.first_fleet().capacity);
  const double q2 = static_cast<double>(inst.second_fleet().capacity);
  const double inf = lp::kInf;
  ModelBuilder mb;
  double constant = 0.0;

  // inventories: end-of-period stock, index t = 1..tau
  std::vector<std::vector<int>> cus_stock(nn, std::vector<int>(tau + 1, -1));
  std::vector<std::vector<int>> sat_stock(ns, std::vector<int>(tau + 1, -1));
  for (int c = 0; c < nn; ++c) {
    const auto& cd = inst.customer(c);
    for (int t = 1; t <= tau; ++t) {
      cus_stock[c][t] = mb.var(cd.holding_cost, 0.0, static_cast<double>(cd.capacity - inst.demand(c, t)));
      // only delivered goods pay holding
      constant -= cd.holding_cost * static_cast<double>(inst.tables(c).residual_inventory[t]);
    }
  }
  for (int s = 0; s < ns; ++s)
    for (int t = 1; t <= tau; ++t) sat_stock[s][t] = mb.var(inst.satellite(s).holding_cost, 0.0, inf);

  std::vector<std::vector<int>> inflow(ns, std::vector<int>(tau + 1, -1));
  // q[s][t][c]: quantity delivered to c from s in t
  std::vector<std::vector<std::vector<int>>> q(ns, std::vector<std::vector<int>>(tau + 1, std::vector<int>(nn, -1)));
  std::vector<std::vector<std::vector<int>>> z = q;

  for (int t = 1; t <= tau; ++t) {
    // first echelon: per-supplier arc flows over {u} + satellites
    std::vector<std::pair<int, double>> fleet1;
    std::vector<std::vector<std::pair<int, double>>> sat_in_deg(ns), sat_load(ns);
    for (int u = 0; u < nu; ++u) {
      const int nodes = 1 + ns;  // 0 = supplier, 1 + s = satellite s
      auto vertex = [&](int i) { return i == 0 ? inst.supplier_vertex(u) : inst.satellite_vertex(i - 1); };
      std::vector<std::vector<int>> w(nodes, std::vector<int>(nodes, -1)), h = w;
      for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) {
          if (i == j) continue;
          w[i][j] = mb.var(inst.cost(vertex(i), vertex(j)), 0.0, 1.0);
          if (j != 0) {
            h[i][j] = mb.var(0.0, 0.0, inf);
            mb.row(Sense::kLessEqual, 0.0, {{h[i][j], 1.0}, {w[i][j], -q1 * ns}});
          }
        }
      for (int i = 0; i < nodes; ++i) {
        std::vector<std::pair<int, double>> bal;
        for (int j = 0; j < nodes; ++j)
          if (j != i) bal.push_back({w[i][j], 1.0}), bal.push_back({w[j][i], -1.0});
        mb.row(Sense::kEqual, 0.0, bal);
      }
      for (int s = 0; s < ns; ++s) {
        fleet1.push_back({w[0][1 + s], 1.0});
        for (int i = 0; i < nodes; ++i) {
          if (i == 1 + s) continue;
          sat_in_deg[s].push_back({w[i][1 + s], 1.0});
          sat_load[s].push_back({h[i][1 + s], 1.0});
          if (i != 0) sat_load[s].push_back({h[1 + s][i], -1.0});
        }
      }
    }
    mb.row(Sense::kLessEqual, inst.first_fleet().vehicles, fleet1);
    for (int s = 0; s < ns; ++s) {
      const int m = mb.var(0.0, 0.0, 1.0);
      inflow[s][t] = mb.var(0.0, 0.0, inf);
      auto deg = sat_in_deg[s];
      deg.push_back({m, -1.0});
      mb.row(Sense::kEqual, 0.0, deg);
      auto load = sat_load[s];
      load.push_back({inflow[s][t], -1.0});
      mb.row(Sense::kEqual, 0.0, load);
      mb.row(Sense::kLessEqual, 0.0, {{inflow[s][t], 1.0}, {m, -q1}});
      mb.row(Sense::kLessEqual, 0.0, {{m, 1.0}, {inflow[s][t], -1.0}});
    }

    // second echelon: per-satellite edges, visits and a single-commodity load flow
    std::vector<std::pair<int, double>> fleet2;
    for (int s = 0; s < ns; ++s) {
      const int v = mb.var(0.0, 0.0, inf);
      fleet2.push_back({v, 1.0});
      std::vector<int> xs(nn), gs(nn);
      std::vector<std::vector<int>> x(nn, std::vector<int>(nn, -1)), g = x;
      for (int c = 0; c < nn; ++c) {
        z[s][t][c] = mb.var(0.0, 0.0, 1.0);
        q[s][t][c] = mb.var(0.0, 0.0, inf);
        xs[c] = mb.var(inst.satellite_customer_cost(s, c), 0.0, 2.0);
        gs[c] = mb.var(0.0, 0.0, inf);
        mb.row(Sense::kLessEqual, 0.0, {{gs[c], 1.0}, {xs[c], -q2}});
        mb.row(Sense::kLessEqual, 0.0, {{xs[c], 1.0}, {z[s][t][c], -2.0}});
        const double most = std::min(q2, static_cast<double>(inst.customer(c).capacity));
        mb.row(Sense::kLessEqual, 0.0, {{q[s][t][c], 1.0}, {z[s][t][c], -most}});
      }
      for (int a = 0; a < nn; ++a)
        for (int b = a + 1; b < nn; ++b) {
          x[a][b] = x[b][a] = mb.var(inst.customer_cost(a, b), 0.0, 1.0);
          g[a][b] = mb.var(0.0, 0.0, inf);
          g[b][a] = mb.var(0.0, 0.0, inf);
          mb.row(Sense::kLessEqual, 0.0, {{g[a][b], 1.0}, {g[b][a], 1.0}, {x[a][b], -q2}});
          mb.row(Sense::kLessEqual, 0.0, {{x[a][b], 1.0}, {z[s][t][a], -1.0}});
          mb.row(Sense::kLessEqual, 0.0, {{x[a][b], 1.0}, {z[s][t][b], -1.0}});
        }
      std::vector<std::pair<int, double>> sat_deg{{v, -2.0}};
      for (int c = 0; c < nn; ++c) {
        sat_deg.push_back({xs[c], 1.0});
        std::vector<std::pair<int, double>> deg{{xs[c], 1.0}, {z[s][t][c], -2.0}};
        std::vector<std::pair<int, double>> flow{{gs[c], 1.0}, {q[s][t][c], -1.0}};
        for (int o = 0; o < nn; ++o) {
          if (o == c) continue;
          deg.push_back({x[c][o], 1.0});
          flow.push_back({g[o][c], 1.0});
          flow.push_back({g[c][o], -1.0});
        }
        mb.row(Sense::kEqual, 0.0, deg);
        mb.row(Sense::kEqual, 0.0, flow);
      }
      mb.row(Sense::kEqual, 0.0, sat_deg);
    }
    mb.row(Sense::kLessEqual, inst.second_fleet().vehicles, fleet2);
    for (int c = 0; c < nn; ++c) {
      std::vector<std::pair<int, double>> once;
      for (int s = 0; s < ns; ++s) once.push_back({z[s][t][c], 1.0});
      mb.row(Sense::kLessEqual, 1.0, once);
    }
  }

  // inventory balances; stock before consumption within capacity
  for (int s = 0; s < ns; ++s) {
    const auto& sd = inst.satellite(s);
    for (int t = 1; t <= tau; ++t) {
      std::vector<std::pair<int, double>> bal{{inflow[s][t], 1.0}, {sat_stock[s][t], -1.0}};
      std::vector<std::pair<int, double>> cap{{inflow[s][t], 1.0}};
      double start = 0.0;
      if (t > 1) {
        bal.push_back({sat_stock[s][t - 1], 1.0});
        cap.push_back({sat_stock[s][t - 1], 1.0});
      } else {
        start = static_cast<double>(sd.initial_inventory);
      }
      for (int c = 0; c < nn; ++c) bal.push_back({q[s][t][c], -1.0});
      mb.row(Sense::kEqual, -start, bal);
      mb.row(Sense::kLessEqual, static_cast<double>(sd.capacity) - start, cap);
    }
  }
  for (int c = 0; c < nn; ++c) {
    const auto& cd = inst.customer(c);
    for (int t = 1; t <= tau; ++t) {
      std::vector<std::pair<int, double>> bal{{cus_stock[c][t], -1.0}};
      double start = 0.0;
      if (t > 1) bal.push_back({cus_stock[c][t - 1], 1.0});
      else start = static_cast<double>(cd.initial_inventory);
      for (int s = 0; s < ns; ++s) bal.push_back({q[s][t][c], 1.0});
      mb.row(Sense::kEqual, static_cast<double>(inst.demand(c, t)) - start, bal);
    }
  }

  const auto sol = lp::solve_lp(mb.build());
  if (sol.status != lp::Status::kOptimal) return std::nullopt;
  return sol.objective + constant;
}

}  // namespace teirp::testing
