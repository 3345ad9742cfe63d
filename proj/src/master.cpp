#include "teirp/master.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace teirp {

using lp::Entry;
using lp::Sense;
using State = lp::Basis::State;

Quantity Column::load() const {
  Quantity s = 0;
  for (const auto& d : deliveries) s += d.total();
  return s;
}

int Column::visits(int c) const {
  return static_cast<int>(std::count(sequence.begin(), sequence.end(), c));
}

bool Column::elementary() const {
  auto s = sequence;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

const CustomerDelivery* Column::delivery(int c) const {
  auto it = std::lower_bound(deliveries.begin(), deliveries.end(), c,
                             [](const CustomerDelivery& d, int v) { return d.customer < v; });
  return it != deliveries.end() && it->customer == c ? &*it : nullptr;
}

int Column::edge_traversals(const Instance& inst, int a, int b) const {
  if (sequence.empty()) return 0;
  const int sv = inst.satellite_vertex(satellite);
  int count = 0;
  int prev = sv;
  auto step = [&](int v) {
    if ((prev == a && v == b) || (prev == b && v == a)) ++count;
    prev = v;
  };
  for (int c : sequence) step(inst.customer_vertex(c));
  step(sv);
  return count;
}

bool Column::extreme(const Instance& inst) const {
  if (!elementary()) return true;
  int partial = 0;
  for (const auto& d : deliveries) {
    const auto& tb = inst.tables(d.customer);
    for (int h = period; h <= inst.horizon() + 1; ++h)
      if (d.q[h] > 0 && d.q[h] < tb.ub[period][h]) ++partial;
  }
  return partial <= 1;
}

Column make_column(const Instance& inst, int s, int t, std::vector<int> sequence,
                   std::vector<CustomerDelivery> per_visit) {
  const int tau = inst.horizon();
  Column col;
  col.satellite = s;
  col.period = t;
  if (sequence.size() > 1 && sequence.front() > sequence.back())
    std::reverse(sequence.begin(), sequence.end());
  col.sequence = std::move(sequence);
  std::sort(per_visit.begin(), per_visit.end(),
            [](const auto& a, const auto& b) { return a.customer < b.customer; });
  for (auto& d : per_visit) {
    if (static_cast<int>(d.q.size()) != tau + 2)
      throw ContractViolation("sub-delivery vector must have tau + 2 entries");
    if (!col.deliveries.empty() && col.deliveries.back().customer == d.customer) {
      for (int h = 0; h <= tau + 1; ++h) col.deliveries.back().q[h] += d.q[h];
    } else {
      col.deliveries.push_back(std::move(d));
    }
  }
  for (const auto& d : col.deliveries)
    if (col.visits(d.customer) == 0)
      throw ContractViolation(fmt::format("delivery to unvisited customer {}", d.customer));
  col.cost = inst.route_cost(s, col.sequence) + rdp_holding_cost(inst, t, col.deliveries);
  return col;
}

std::string route_key(const Column& col) {
  return fmt::format("{}|{}|{}", col.satellite, col.period, fmt::join(col.sequence, ","));
}

std::string column_key(const Column& col) {
  std::string key = route_key(col);
  for (const auto& d : col.deliveries) key += fmt::format("|{}:{}", d.customer, fmt::join(d.q, ","));
  return key;
}

std::string BranchDecision::describe() const {
  const char* s = sense == Sense::kLessEqual ? "<=" : sense == Sense::kGreaterEqual ? ">=" : "=";
  return fmt::format("type{} t={} s={} c={} p={} e=({},{}) {} {}", static_cast<int>(type), period,
                     satellite, customer, route, vertex_a, vertex_b, s, rhs);
}

double decision_coefficient(const Instance& inst, const BranchDecision& d, const Column& col) {
  const bool in_period = d.period == 0 || d.period == col.period;
  switch (d.type) {
    case DecisionType::kSecondTotal: return 1.0;
    case DecisionType::kSecondPeriod: return in_period ? 1.0 : 0.0;
    case DecisionType::kCustomerFlow: return col.visits(d.customer);
    case DecisionType::kCustomerPeriod: return in_period ? col.visits(d.customer) : 0.0;
    case DecisionType::kCustomerSatellite:
      return in_period && col.satellite == d.satellite ? col.visits(d.customer) : 0.0;
    case DecisionType::kEdge:
      return in_period ? col.edge_traversals(inst, d.vertex_a, d.vertex_b) : 0.0;
    default: return 0.0;
  }
}

double decision_lambda_coefficient(const BranchDecision& d, const FirstEchelonRoute& route,
                                   int route_index, int period) {
  switch (d.type) {
    case DecisionType::kFirstTotal: return 1.0;
    case DecisionType::kFirstPeriod: return d.period == period ? 1.0 : 0.0;
    case DecisionType::kSatelliteFlow: return route.visits(d.satellite) ? 1.0 : 0.0;
    case DecisionType::kFirstRoute: return d.route == route_index && d.period == period ? 1.0 : 0.0;
    default: return 0.0;
  }
}

bool decision_forbids(const Instance& inst, const BranchDecision& d, const Column& col) {
  return d.sense != Sense::kGreaterEqual && d.rhs < 0.5 && decision_coefficient(inst, d, col) > 0;
}

double reduced_cost(const Instance& inst, const Column& col, const DualPrices& duals,
                    const std::vector<BranchDecision>& decisions) {
  const int tau = inst.horizon();
  const int t = col.period;
  double rc = col.cost + static_cast<double>(col.load()) * duals.outflow[col.satellite][t];
  for (const auto& d : col.deliveries) {
    const int c = d.customer;
    for (int h = t; h <= tau + 1; ++h) {
      const double q = static_cast<double>(d.q[h]);
      if (q == 0) continue;
      rc -= q * duals.demand[c][h];
      for (int l = t; l < h && l <= tau; ++l) rc -= q * duals.capacity[c][l];
    }
  }
  for (int c = 0; c < inst.num_customers(); ++c)
    if (int v = col.visits(c)) rc -= v * duals.visit[c][t];
  rc -= duals.fleet[t];
  for (std::size_t k = 0; k < decisions.size(); ++k)
    if (duals.branching[k] != 0.0)
      rc -= duals.branching[k] * decision_coefficient(inst, decisions[k], col);
  return rc;
}

std::vector<Column> initial_columns(const Instance& inst) {
  const int tau = inst.horizon();
  std::vector<int> sats(inst.num_satellites());
  for (int s = 0; s < inst.num_satellites(); ++s) sats[s] = s;
  std::sort(sats.begin(), sats.end(),
            [&](int a, int b) { return inst.satellite(a).id < inst.satellite(b).id; });
  std::vector<Column> out;
  for (int t = 1; t <= tau; ++t) {
    std::size_t cur = 0;
    Quantity used = 0;
    for (int c = 0; c < inst.num_customers(); ++c) {
      const auto& tb = inst.tables(c);
      if (tb.residual_demand[t] <= 0 || !tb.can_deliver(t, t)) continue;
      const Quantity q = std::min({tb.residual_demand[t], tb.ub[t][t], inst.second_fleet().capacity});
      if (q <= 0) continue;
      auto limit = [&](int s) { return std::min(inst.satellite(s).capacity, inst.first_fleet().capacity); };
      while (used + q > limit(sats[cur]) && cur + 1 < sats.size()) {
        ++cur;
        used = 0;
      }
      used += q;
      CustomerDelivery d{c, std::vector<Quantity>(tau + 2, 0)};
      d.q[t] = q;
      out.push_back(make_column(inst, sats[cur], t, {c}, {d}));
    }
  }
  return out;
}

Master::Master(const Instance& inst, std::vector<FirstEchelonRoute> routes, MasterOptions opts)
    : inst_(&inst), routes_(std::move(routes)), opts_(opts), tau_(inst.horizon()) {
  build({}, nullptr);
}

int Master::expected_rows(const Instance& inst, int routes) {
  const int tau = inst.horizon(), ns = inst.num_satellites(), nn = inst.num_customers();
  int cover = 0;
  for (int c = 0; c < nn; ++c)
    for (int h = 1; h <= tau; ++h) cover += inst.tables(c).residual_demand[h] > 0;
  return ns * tau            // outflow link
         + cover             // demand
         + ns * tau          // satellite capacity
         + nn * tau          // customer capacity
         + routes * tau      // first-echelon vehicle capacity
         + ns * tau          // satellite visited once
         + nn * tau          // customer visited once
         + tau + tau         // fleets
         + ns                // initial satellite inventory
         + ns * tau          // no inflow without a visit
         + ns * tau;         // visit implies inflow
}

void Master::build(const std::vector<BranchDecision>& decisions, const std::vector<int>* route_row) {
  const auto& inst = *inst_;
  const int tau = tau_, ns = inst.num_satellites(), nn = inst.num_customers();
  const int np = static_cast<int>(routes_.size());
  const double q1 = static_cast<double>(inst.first_fleet().capacity);
  lp_ = lp::LinearProgram();
  auto grid = [](int a, int b) { return std::vector<std::vector<int>>(a, std::vector<int>(b, -1)); };

  row_outflow_ = grid(ns, tau + 2);
  for (int s = 0; s < ns; ++s)
    for (int t = 1; t <= tau; ++t) row_outflow_[s][t] = lp_.add_row(Sense::kEqual, 0.0, fmt::format("out_s{}_t{}", s, t));
  row_cover_ = grid(nn, tau + 2);
  for (int c = 0; c < nn; ++c)
    for (int h = 1; h <= tau; ++h)
      if (Quantity d = inst.tables(c).residual_demand[h]; d > 0)
        row_cover_[c][h] = lp_.add_row(Sense::kEqual, static_cast<double>(d), fmt::format("dem_c{}_h{}", c, h));
  row_sat_cap_ = grid(ns, tau + 2);
  for (int s = 0; s < ns; ++s)
    for (int t = 1; t <= tau; ++t)
      row_sat_cap_[s][t] = lp_.add_row(Sense::kLessEqual, static_cast<double>(inst.satellite(s).capacity),
                                       fmt::format("scap_s{}_t{}", s, t));
  row_cus_cap_ = grid(nn, tau + 2);
  for (int c = 0; c < nn; ++c) {
    const auto& tb = inst.tables(c);
    for (int h = 1; h <= tau; ++h)
      row_cus_cap_[c][h] = lp_.add_row(
          Sense::kLessEqual,
          static_cast<double>(inst.customer(c).capacity - inst.demand(c, h) - tb.residual_inventory[h]),
          fmt::format("ccap_c{}_h{}", c, h));
  }
  row_first_cap_ = grid(np, tau + 2);
  for (int p = 0; p < np; ++p)
    for (int l = 1; l <= tau; ++l)
      row_first_cap_[p][l] = lp_.add_row(Sense::kLessEqual, q1 * static_cast<double>(routes_[p].satellites.size()),
                                         fmt::format("q1_p{}_t{}", p, l));
  row_sat_visit_ = grid(ns, tau + 2);
  for (int s = 0; s < ns; ++s)
    for (int t = 1; t <= tau; ++t) row_sat_visit_[s][t] = lp_.add_row(Sense::kLessEqual, 1.0, fmt::format("svis_s{}_t{}", s, t));
  row_cus_visit_ = grid(nn, tau + 2);
  for (int c = 0; c < nn; ++c)
    for (int t = 1; t <= tau; ++t) row_cus_visit_[c][t] = lp_.add_row(Sense::kLessEqual, 1.0, fmt::format("cvis_c{}_t{}", c, t));
  row_fleet1_.assign(tau + 2, -1);
  row_fleet2_.assign(tau + 2, -1);
  for (int t = 1; t <= tau; ++t)
    row_fleet1_[t] = lp_.add_row(Sense::kLessEqual, inst.first_fleet().vehicles, fmt::format("k1_t{}", t));
  for (int t = 1; t <= tau; ++t)
    row_fleet2_[t] = lp_.add_row(Sense::kLessEqual, inst.second_fleet().vehicles, fmt::format("k2_t{}", t));
  row_init_.assign(ns, -1);
  for (int s = 0; s < ns; ++s)
    row_init_[s] = lp_.add_row(Sense::kEqual, static_cast<double>(inst.satellite(s).initial_inventory),
                               fmt::format("init_s{}", s));
  row_in_ = grid(ns, tau + 2);
  for (int s = 0; s < ns; ++s)
    for (int l = 1; l <= tau; ++l) row_in_[s][l] = lp_.add_row(Sense::kLessEqual, 0.0, fmt::format("in_s{}_t{}", s, l));
  row_at_least_ = grid(ns, tau + 2);
  for (int s = 0; s < ns; ++s)
    for (int l = 1; l <= tau; ++l) row_at_least_[s][l] = lp_.add_row(Sense::kLessEqual, 0.0, fmt::format("one_s{}_t{}", s, l));
  base_rows_ = lp_.num_rows();

  decisions_ = decisions;
  decision_rows_.clear();
  for (std::size_t k = 0; k < decisions_.size(); ++k)
    decision_rows_.push_back(lp_.add_row(decisions_[k].sense, decisions_[k].rhs, fmt::format("br{}", k)));
  const int first_route_row = lp_.num_rows();
  if (route_row) {
    const int nr = route_row->empty() ? 0 : *std::max_element(route_row->begin(), route_row->end()) + 1;
    for (int r = 0; r < nr; ++r) lp_.add_row(Sense::kEqual, 0.0, fmt::format("route{}", r));
  }

  fixed_cols_.clear();
  col_lambda_ = grid(np, tau + 2);
  for (int p = 0; p < np; ++p) {
    const auto& rt = routes_[p];
    for (int t = 1; t <= tau; ++t) {
      std::vector<Entry> e;
      e.push_back({row_first_cap_[p][t], q1 * static_cast<double>(rt.satellites.size() - 1)});
      for (int s : rt.satellites) {
        e.push_back({row_sat_visit_[s][t], 1.0});
        e.push_back({row_in_[s][t], -q1});
        e.push_back({row_at_least_[s][t], 1.0});
      }
      e.push_back({row_fleet1_[t], 1.0});
      for (std::size_t k = 0; k < decisions_.size(); ++k)
        if (double v = decision_lambda_coefficient(decisions_[k], rt, p, t); v != 0.0)
          e.push_back({decision_rows_[k], v});
      col_lambda_[p][t] = lp_.add_column(rt.cost, 0.0, 1.0, std::move(e), fmt::format("lam_p{}_t{}", p, t));
      fixed_cols_.push_back(col_lambda_[p][t]);
    }
  }
  col_psi_.assign(ns, grid(tau + 1, tau + 2));
  for (int s = 0; s < ns; ++s) {
    const double fh = inst.satellite(s).holding_cost;
    for (int l = 0; l <= tau; ++l)
      for (int h = std::max(l, 1); h <= tau + 1; ++h) {
        std::vector<Entry> e;
        if (h <= tau) e.push_back({row_outflow_[s][h], 1.0});
        for (int t = std::max(l, 1); t <= std::min(h, tau); ++t) e.push_back({row_sat_cap_[s][t], 1.0});
        if (l == 0) {
          e.push_back({row_init_[s], 1.0});
        } else {
          for (int p = 0; p < np; ++p)
            if (routes_[p].visits(s)) e.push_back({row_first_cap_[p][l], 1.0});
          e.push_back({row_in_[s][l], 1.0});
          e.push_back({row_at_least_[s][l], -1.0});
        }
        const int periods = std::max(0, std::min(h - 1, tau) - std::max(l, 1) + 1);
        col_psi_[s][l][h] = lp_.add_column(fh * periods, 0.0, lp::kInf, std::move(e),
                                           fmt::format("psi_s{}_l{}_h{}", s, l, h));
        fixed_cols_.push_back(col_psi_[s][l][h]);
      }
  }
  base_artificials_.clear();
  for (int c = 0; c < nn; ++c)
    for (int h = 1; h <= tau; ++h)
      if (row_cover_[c][h] >= 0)
        base_artificials_.push_back(lp_.add_column(opts_.artificial_cost, 0.0, lp::kInf,
                                                   {{row_cover_[c][h], 1.0}}, fmt::format("art_dem_c{}_h{}", c, h)));
  for (int s = 0; s < ns; ++s)
    for (int t = 1; t <= tau; ++t)
      base_artificials_.push_back(lp_.add_column(opts_.artificial_cost, 0.0, lp::kInf,
                                                 {{row_sat_cap_[s][t], -1.0}}, fmt::format("art_scap_s{}_t{}", s, t)));
  for (int j : base_artificials_) fixed_cols_.push_back(j);

  pool_cols_.clear();
  for (std::size_t k = 0; k < pool_.size(); ++k) {
    auto e = column_entries(pool_[k]);
    if (route_row && (*route_row)[k] >= 0) e.push_back({first_route_row + (*route_row)[k], 1.0});
    const double up = forbidden(pool_[k]) ? 0.0 : lp::kInf;
    pool_cols_.push_back(lp_.add_column(pool_[k].cost, 0.0, up, std::move(e), fmt::format("col{}", k)));
  }
  decision_artificials_.clear();
  for (std::size_t k = 0; k < decisions_.size(); ++k) {
    int j = -1;
    if (decisions_[k].sense != Sense::kLessEqual)
      j = lp_.add_column(opts_.artificial_cost, 0.0, lp::kInf, {{decision_rows_[k], 1.0}},
                         fmt::format("art_br{}", k));
    decision_artificials_.push_back(j);
  }
}

std::vector<Entry> Master::column_entries(const Column& col) const {
  const auto& inst = *inst_;
  const int tau = tau_, t = col.period;
  std::vector<Entry> e;
  e.push_back({row_outflow_[col.satellite][t], -static_cast<double>(col.load())});
  for (const auto& d : col.deliveries) {
    const int c = d.customer;
    for (int h = t; h <= tau; ++h)
      if (d.q[h] != 0) {
        if (row_cover_[c][h] < 0)
          throw ContractViolation(fmt::format("column delivers to customer {} for period {} without demand", c, h));
        e.push_back({row_cover_[c][h], static_cast<double>(d.q[h])});
      }
    Quantity later = 0;
    for (int h = tau + 1; h > t; --h) {
      later += d.q[h];
      // stock reserved past period h - 1
      if (h - 1 <= tau && later != 0) e.push_back({row_cus_cap_[c][h - 1], static_cast<double>(later)});
    }
  }
  for (int c = 0; c < inst.num_customers(); ++c)
    if (int v = col.visits(c)) e.push_back({row_cus_visit_[c][t], static_cast<double>(v)});
  e.push_back({row_fleet2_[t], 1.0});
  for (std::size_t k = 0; k < decisions_.size(); ++k)
    if (double v = decision_coefficient(inst, decisions_[k], col); v != 0.0)
      e.push_back({decision_rows_[k], v});
  return e;
}

bool Master::forbidden(const Column& col) const {
  return std::any_of(decisions_.begin(), decisions_.end(),
                     [&](const BranchDecision& d) { return decision_forbids(*inst_, d, col); });
}

int Master::add_column(Column col) {
  auto key = column_key(col);
  if (keys_.count(key)) return -1;
  const int k = static_cast<int>(pool_.size());
  keys_.emplace(std::move(key), k);
  pool_.push_back(std::move(col));
  const auto& c = pool_.back();
  pool_cols_.push_back(lp_.add_column(c.cost, 0.0, forbidden(c) ? 0.0 : lp::kInf, column_entries(c),
                                      fmt::format("col{}", k)));
  return k;
}

void Master::set_decisions(std::vector<BranchDecision> decisions, const SavedBasis* warm) {
  build(decisions, nullptr);
  basis_ = {};
  sol_ = {};
  if (!warm) return;
  basis_.columns.assign(lp_.num_columns(), State::kLower);
  basis_.rows.assign(lp_.num_rows(), State::kBasic);
  if (warm->fixed.size() == fixed_cols_.size())
    for (std::size_t i = 0; i < fixed_cols_.size(); ++i) basis_.columns[fixed_cols_[i]] = warm->fixed[i];
  for (std::size_t k = 0; k < pool_cols_.size() && k < warm->pool.size(); ++k)
    basis_.columns[pool_cols_[k]] = warm->pool[k];
  for (int i = 0; i < base_rows_ && i < static_cast<int>(warm->base_rows.size()); ++i) basis_.rows[i] = warm->base_rows[i];
  for (std::size_t k = 0; k < decision_rows_.size(); ++k) {
    if (k < warm->decision_rows.size()) basis_.rows[decision_rows_[k]] = warm->decision_rows[k];
    if (decision_artificials_[k] >= 0 && k < warm->decision_artificials.size())
      basis_.columns[decision_artificials_[k]] = warm->decision_artificials[k];
  }
}

SavedBasis Master::save_basis() const {
  SavedBasis b;
  const auto& bs = sol_.basis;
  if (bs.empty()) return b;
  auto col = [&](int j) { return j < static_cast<int>(bs.columns.size()) ? bs.columns[j] : State::kLower; };
  for (int j : fixed_cols_) b.fixed.push_back(col(j));
  for (int j : pool_cols_) b.pool.push_back(col(j));
  for (int i = 0; i < base_rows_; ++i) b.base_rows.push_back(bs.rows[i]);
  for (std::size_t k = 0; k < decision_rows_.size(); ++k) {
    b.decision_rows.push_back(bs.rows[decision_rows_[k]]);
    b.decision_artificials.push_back(decision_artificials_[k] >= 0 ? col(decision_artificials_[k]) : State::kLower);
  }
  return b;
}

lp::Status Master::solve() {
  sol_ = lp::solve_lp(lp_, basis_.empty() ? nullptr : &basis_);
  if (sol_.status == lp::Status::kOptimal && !sol_.basis.empty()) basis_ = sol_.basis;
  return sol_.status;
}

DualPrices Master::duals() const {
  if (sol_.status != lp::Status::kOptimal) throw ContractViolation("duals requested from a non-optimal master");
  const auto& inst = *inst_;
  const int tau = tau_, ns = inst.num_satellites(), nn = inst.num_customers();
  auto y = [&](int row) { return row >= 0 ? sol_.duals[row] : 0.0; };
  DualPrices d;
  d.outflow.assign(ns, std::vector<double>(tau + 2, 0.0));
  for (int s = 0; s < ns; ++s)
    for (int t = 1; t <= tau; ++t) d.outflow[s][t] = y(row_outflow_[s][t]);
  d.demand.assign(nn, std::vector<double>(tau + 2, 0.0));
  d.capacity.assign(nn, std::vector<double>(tau + 2, 0.0));
  d.visit.assign(nn, std::vector<double>(tau + 2, 0.0));
  for (int c = 0; c < nn; ++c)
    for (int h = 1; h <= tau; ++h) {
      d.demand[c][h] = y(row_cover_[c][h]);
      d.capacity[c][h] = y(row_cus_cap_[c][h]);
      d.visit[c][h] = y(row_cus_visit_[c][h]);
    }
  d.fleet.assign(tau + 2, 0.0);
  for (int t = 1; t <= tau; ++t) d.fleet[t] = y(row_fleet2_[t]);
  for (int r : decision_rows_) d.branching.push_back(y(r));
  return d;
}

double Master::artificial_total() const {
  if (sol_.primal.empty()) return 0.0;
  double s = 0.0;
  for (int j : base_artificials_) s += sol_.primal[j];
  for (int j : decision_artificials_)
    if (j >= 0) s += sol_.primal[j];
  return s;
}

double Master::lambda(int p, int t) const { return sol_.primal.at(col_lambda_[p][t]); }
double Master::alpha(int k) const { return sol_.primal.at(pool_cols_[k]); }
double Master::psi(int s, int l, int h) const {
  if (l < 0 || l > tau_ || h < 1 || h > tau_ + 1) return 0.0;
  const int j = col_psi_[s][l][h];
  return j >= 0 ? sol_.primal.at(j) : 0.0;
}

std::optional<IntegerSolution> Master::solve_integer(double seconds, long node_limit) const {
  Master tmp(*this);
  std::map<std::string, int> route_ids;
  std::vector<int> route_row(pool_.size(), -1);
  for (std::size_t k = 0; k < pool_.size(); ++k) {
    if (!pool_[k].elementary()) continue;  // visit rows keep these at most 1/2
    auto [it, fresh] = route_ids.emplace(route_key(pool_[k]), static_cast<int>(route_ids.size()));
    route_row[k] = it->second;
  }
  tmp.build({}, &route_row);
  auto& lp = tmp.lp_;
  for (int j : tmp.base_artificials_) lp.set_bounds(j, 0.0, 0.0);
  for (std::size_t k = 0; k < pool_.size(); ++k)
    if (route_row[k] < 0) lp.set_bounds(tmp.pool_cols_[k], 0.0, 0.0);
  std::vector<int> ints;
  for (int j : tmp.fixed_cols_)
    if (lp.column_name(j).starts_with("lam_")) ints.push_back(j);
  const int first_route_row = tmp.base_rows_;
  for (std::size_t r = 0; r < route_ids.size(); ++r)
    ints.push_back(lp.add_column(0.0, 0.0, 1.0, {{first_route_row + static_cast<int>(r), -1.0}},
                                 fmt::format("z{}", r)));
  auto res = lp::solve_milp(lp, ints, std::chrono::duration<double>(seconds), node_limit);
  if (!res) return std::nullopt;
  IntegerSolution out;
  out.objective = res->objective;
  out.nodes = res->nodes;
  out.proven_optimal = res->proven_optimal;
  out.lambda.assign(routes_.size(), std::vector<double>(tau_ + 2, 0.0));
  for (std::size_t p = 0; p < routes_.size(); ++p)
    for (int t = 1; t <= tau_; ++t) out.lambda[p][t] = std::round(res->values[tmp.col_lambda_[p][t]]);
  for (std::size_t k = 0; k < pool_.size(); ++k)
    if (double a = res->values[tmp.pool_cols_[k]]; a > 1e-9) out.columns.emplace_back(static_cast<int>(k), a);
  out.psi.assign(inst_->num_satellites(),
                 std::vector<std::vector<double>>(tau_ + 2, std::vector<double>(tau_ + 2, 0.0)));
  for (int s = 0; s < inst_->num_satellites(); ++s)
    for (int l = 0; l <= tau_; ++l)
      for (int h = std::max(l, 1); h <= tau_ + 1; ++h)
        if (int j = tmp.col_psi_[s][l][h]; j >= 0) out.psi[s][l][h] = res->values[j];
  return out;
}

}  // namespace teirp
