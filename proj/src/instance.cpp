#include "teirp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace teirp {

double euclidean(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

Quantity prefix_demand(const InventoryProfile& p, int from, int to) {
  // sum of d^l for l = from..to (1-based, inclusive); empty when to < from
  Quantity s = 0;
  for (int l = from; l <= to; ++l) s += p.demand[l - 1];
  return s;
}

Quantity residual_inventory_at(const InventoryProfile& p, int h) {
  if (h <= 0) return p.initial;
  return std::max<Quantity>(0, p.initial - prefix_demand(p, 1, h));
}

void check_period(const InventoryProfile& p, int t) {
  if (t < 1 || t > p.horizon())
    throw InputError(fmt::format("period {} outside 1..{}", t, p.horizon()));
}

}  // namespace

std::vector<Quantity> residual_inventory(const InventoryProfile& p) {
  std::vector<Quantity> out(p.horizon());
  for (int h = 1; h <= p.horizon(); ++h) out[h - 1] = residual_inventory_at(p, h);
  return out;
}

std::vector<Quantity> residual_demand(const InventoryProfile& p) {
  std::vector<Quantity> out(p.horizon());
  for (int h = 1; h <= p.horizon(); ++h)
    out[h - 1] = std::max<Quantity>(0, p.demand[h - 1] - residual_inventory_at(p, h - 1));
  return out;
}

std::vector<int> delivery_periods(const InventoryProfile& p, int t) {
  check_period(p, t);
  const int tau = p.horizon();
  const auto dbar = residual_demand(p);
  std::vector<int> out;
  for (int h = t; h <= tau + 1; ++h) {
    const Quantity cum = prefix_demand(p, t, h - 1);
    if (h <= tau) {
      if (dbar[h - 1] > 0 && (h == t || cum < p.capacity)) out.push_back(h);
    } else if (cum < p.capacity) {
      out.push_back(h);
    }
  }
  return out;
}

Quantity subdelivery_upper_bound(const InventoryProfile& p, int t, int h) {
  const auto periods = delivery_periods(p, t);
  if (std::find(periods.begin(), periods.end(), h) == periods.end())
    throw ContractViolation(fmt::format("period {} is not a delivery period of {}", h, t));
  const int tau = p.horizon();
  const Quantity inv_before = residual_inventory_at(p, h - 1);
  if (h == t) return std::min(residual_demand(p)[h - 1], p.capacity - inv_before);
  const Quantity room = p.capacity - prefix_demand(p, t, h - 1) - inv_before;
  if (h == tau + 1) return room;
  return std::min(residual_demand(p)[h - 1], room);
}

CustomerTables build_customer_tables(const InventoryProfile& p) {
  const int tau = p.horizon();
  CustomerTables tb;
  tb.residual_inventory.resize(tau + 1);
  for (int h = 0; h <= tau; ++h) tb.residual_inventory[h] = residual_inventory_at(p, h);
  const auto dbar = residual_demand(p);
  tb.residual_demand.assign(tau + 1, 0);
  for (int h = 1; h <= tau; ++h) tb.residual_demand[h] = dbar[h - 1];
  tb.delivery_periods.assign(tau + 1, {});
  tb.ub.assign(tau + 1, std::vector<Quantity>(tau + 2, -1));
  for (int t = 1; t <= tau; ++t) {
    tb.delivery_periods[t] = delivery_periods(p, t);
    for (int h : tb.delivery_periods[t]) tb.ub[t][h] = subdelivery_upper_bound(p, t, h);
  }
  auto g = gamma_sets(p);
  tb.t_minus = std::move(g.t_minus);
  tb.gamma_minus = std::move(g.gamma_minus);
  tb.gamma_plus = std::move(g.gamma_plus);
  return tb;
}

GammaSets gamma_sets(const InventoryProfile& p) {
  const int tau = p.horizon();
  std::vector<std::vector<int>> plus(tau + 1);
  for (int t = 1; t <= tau; ++t) plus[t] = delivery_periods(p, t);
  GammaSets g;
  g.t_minus.assign(tau + 2, {});
  g.gamma_minus.assign(tau + 2, {});
  g.gamma_plus.assign(tau + 1, {});
  for (int h = 1; h <= tau + 1; ++h) {
    for (int t = 1; t <= tau; ++t) {
      const auto& set = plus[t];
      if (std::find(set.begin(), set.end(), h) != set.end()) g.t_minus[h].push_back(t);
      if (t <= h && std::any_of(set.begin(), set.end(), [h](int k) { return k >= h; }))
        g.gamma_minus[h].push_back(t);
    }
  }
  for (int t = 1; t <= tau; ++t)
    for (int h = 1; h <= tau; ++h) {
      const auto& gm = g.gamma_minus[h];
      if (std::find(gm.begin(), gm.end(), t) != gm.end()) g.gamma_plus[t].push_back(h);
    }
  return g;
}

std::vector<std::vector<double>> fifo_split(const InventoryProfile& p,
                                            std::span<const double> delivered) {
  const int tau = p.horizon();
  if (static_cast<int>(delivered.size()) != tau)
    throw ContractViolation("fifo_split: one delivered total per period expected");
  std::vector<std::vector<double>> out(tau + 1, std::vector<double>(tau + 2, 0.0));
  // lots in arrival order; lot 0 is the initial inventory
  std::vector<double> lot(tau + 1, 0.0);
  lot[0] = static_cast<double>(p.initial);
  int front = 0;
  for (int h = 1; h <= tau; ++h) {
    lot[h] = delivered[h - 1];
    double need = static_cast<double>(p.demand[h - 1]);
    while (need > tol::kFeasibility && front <= h) {
      const double take = std::min(need, lot[front]);
      lot[front] -= take;
      need -= take;
      if (front > 0) out[front][h] += take;
      if (lot[front] <= tol::kFeasibility) {
        lot[front] = 0.0;
        ++front;
      }
    }
    if (need > tol::kFeasibility)
      throw ContractViolation(fmt::format("fifo_split: demand of period {} not covered", h));
    if (front > h) front = h;  // keep the newest lot reachable
  }
  for (int t = 1; t <= tau; ++t) out[t][tau + 1] += lot[t];
  return out;
}

Instance::Instance(std::vector<SupplierData> suppliers, std::vector<SatelliteData> satellites,
                   std::vector<CustomerData> customers, int horizon, Fleet first, Fleet second,
                   std::vector<EdgeOverride> overrides, bool round_distances)
    : suppliers_(std::move(suppliers)),
      satellites_(std::move(satellites)),
      customers_(std::move(customers)),
      horizon_(horizon),
      first_(first),
      second_(second),
      overrides_(std::move(overrides)),
      round_distances_(round_distances) {
  if (horizon_ < 1) throw InputError("horizon must be at least 1");
  for (const auto& c : customers_)
    if (static_cast<int>(c.demand.size()) != horizon_)
      throw InputError(fmt::format("customer {} has {} demands, expected {}", c.id,
                                   c.demand.size(), horizon_));
  std::set<int> ids;
  auto add_id = [&](int id) {
    if (!ids.insert(id).second) throw InputError(fmt::format("duplicate node id {}", id));
  };
  for (const auto& u : suppliers_) add_id(u.id);
  for (const auto& s : satellites_) add_id(s.id);
  for (const auto& c : customers_) add_id(c.id);

  const int n = num_vertices();
  std::vector<Point> pos;
  pos.reserve(n);
  for (const auto& u : suppliers_) pos.push_back(u.pos);
  for (const auto& s : satellites_) pos.push_back(s.pos);
  for (const auto& c : customers_) pos.push_back(c.pos);
  cost_.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w) {
      double d = euclidean(pos[v], pos[w]);
      if (round_distances_) d = std::round(d);
      cost_[static_cast<std::size_t>(v) * n + w] = d;
    }
  auto vertex_of = [&](int id) {
    if (int u = supplier_index(id); u >= 0) return supplier_vertex(u);
    if (int s = satellite_index(id); s >= 0) return satellite_vertex(s);
    if (int c = customer_index(id); c >= 0) return customer_vertex(c);
    throw InputError(fmt::format("edge override names unknown node {}", id));
  };
  for (const auto& e : overrides_) {
    if (e.cost < 0) throw InputError("edge costs must be nonnegative");
    const int v = vertex_of(e.from_id);
    const int w = vertex_of(e.to_id);
    cost_[static_cast<std::size_t>(v) * n + w] = e.cost;
    cost_[static_cast<std::size_t>(w) * n + v] = e.cost;
  }
  tables_.reserve(customers_.size());
  for (int c = 0; c < num_customers(); ++c) tables_.push_back(build_customer_tables(profile(c)));
}

Quantity Instance::demand(int c, int h) const {
  if (h < 1 || h > horizon_) throw InputError(fmt::format("period {} out of range", h));
  return customer(c).demand[h - 1];
}

InventoryProfile Instance::profile(int c) const {
  if (c < 0 || c >= num_customers()) throw InputError(fmt::format("unknown customer {}", c));
  const auto& cd = customers_[c];
  return InventoryProfile{cd.initial_inventory, cd.capacity, cd.demand};
}

const CustomerTables& Instance::tables(int c) const {
  if (c < 0 || c >= num_customers()) throw InputError(fmt::format("unknown customer {}", c));
  return tables_[c];
}

int Instance::customer_index(int id) const {
  for (int i = 0; i < num_customers(); ++i)
    if (customers_[i].id == id) return i;
  return -1;
}

int Instance::satellite_index(int id) const {
  for (int i = 0; i < num_satellites(); ++i)
    if (satellites_[i].id == id) return i;
  return -1;
}

int Instance::supplier_index(int id) const {
  for (int i = 0; i < num_suppliers(); ++i)
    if (suppliers_[i].id == id) return i;
  return -1;
}

double Instance::route_cost(int s, std::span<const int> seq) const {
  if (seq.empty()) return 0.0;
  const int sv = satellite_vertex(s);
  double total = cost(sv, customer_vertex(seq.front()));
  for (std::size_t k = 1; k < seq.size(); ++k)
    total += customer_cost(seq[k - 1], seq[k]);
  return total + cost(customer_vertex(seq.back()), sv);
}

std::vector<std::string> Instance::check_invariants() const {
  std::vector<std::string> bad;
  if (second_.capacity > first_.capacity) bad.push_back("Q2 exceeds Q1");
  if (first_.capacity < 0 || second_.capacity < 0 || first_.vehicles < 0 || second_.vehicles < 0)
    bad.push_back("negative fleet data");
  if (suppliers_.empty()) bad.push_back("no supplier");
  if (satellites_.empty()) bad.push_back("no satellite");
  for (const auto& s : satellites_) {
    if (s.capacity < 0 || s.initial_inventory < 0 || s.holding_cost < 0)
      bad.push_back(fmt::format("satellite {} has negative data", s.id));
    if (s.initial_inventory > s.capacity)
      bad.push_back(fmt::format("satellite {} initial inventory exceeds capacity", s.id));
  }
  for (const auto& c : customers_) {
    if (c.capacity < 0 || c.initial_inventory < 0 || c.holding_cost < 0)
      bad.push_back(fmt::format("customer {} has negative data", c.id));
    if (c.initial_inventory > c.capacity)
      bad.push_back(fmt::format("customer {} initial inventory exceeds capacity", c.id));
    for (Quantity d : c.demand)
      if (d < 0) bad.push_back(fmt::format("customer {} has negative demand", c.id));
  }
  return bad;
}

Instance read_instance(std::istream& in, bool round_distances) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  std::size_t next = 0;
  auto take = [&](const char* what) -> std::istringstream {
    if (next >= lines.size()) throw InputError(fmt::format("unexpected end of file: {}", what));
    return std::istringstream(lines[next++]);
  };
  auto fail_if = [](std::istringstream& ss, const char* what) {
    if (ss.fail()) throw InputError(fmt::format("malformed {} line", what));
    std::string extra;
    if (ss >> extra) throw InputError(fmt::format("trailing data on {} line", what));
  };

  int nU = 0, nS = 0, nN = 0, tau = 0;
  Fleet first, second;
  {
    auto ss = take("header");
    ss >> nU >> nS >> nN >> tau >> first.vehicles >> first.capacity >> second.vehicles >>
        second.capacity;
    fail_if(ss, "header");
    if (nU < 1 || nS < 1 || nN < 0 || tau < 1) throw InputError("invalid header counts");
  }
  std::vector<SupplierData> sup(nU);
  for (auto& u : sup) {
    auto ss = take("supplier");
    ss >> u.id >> u.pos.x >> u.pos.y;
    fail_if(ss, "supplier");
  }
  std::vector<SatelliteData> sat(nS);
  for (auto& s : sat) {
    auto ss = take("satellite");
    ss >> s.id >> s.pos.x >> s.pos.y >> s.capacity >> s.initial_inventory >> s.holding_cost;
    fail_if(ss, "satellite");
  }
  std::vector<CustomerData> cus(nN);
  for (auto& c : cus) {
    auto ss = take("customer");
    ss >> c.id >> c.pos.x >> c.pos.y >> c.capacity >> c.initial_inventory >> c.holding_cost;
    c.demand.resize(tau);
    for (auto& d : c.demand) ss >> d;
    fail_if(ss, "customer");
  }
  std::vector<EdgeOverride> overrides;
  while (next < lines.size()) {
    auto ss = take("edge");
    std::string tag;
    EdgeOverride e;
    ss >> tag >> e.from_id >> e.to_id >> e.cost;
    if (tag != "edge") throw InputError(fmt::format("unexpected line '{}'", lines[next - 1]));
    fail_if(ss, "edge");
    overrides.push_back(e);
  }
  Instance inst(std::move(sup), std::move(sat), std::move(cus), tau, first, second,
                std::move(overrides), round_distances);
  if (auto bad = inst.check_invariants(); !bad.empty()) throw InputError(bad.front());
  return inst;
}

Instance read_instance_file(const std::string& path, bool round_distances) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open instance file {}", path));
  return read_instance(in, round_distances);
}

void write_instance(std::ostream& out, const Instance& inst) {
  const auto& f1 = inst.first_fleet();
  const auto& f2 = inst.second_fleet();
  out << fmt::format("{} {} {} {} {} {} {} {}\n", inst.num_suppliers(), inst.num_satellites(),
                     inst.num_customers(), inst.horizon(), f1.vehicles, f1.capacity,
                     f2.vehicles, f2.capacity);
  for (const auto& u : inst.suppliers())
    out << fmt::format("{} {} {}\n", u.id, u.pos.x, u.pos.y);
  for (const auto& s : inst.satellites())
    out << fmt::format("{} {} {} {} {} {}\n", s.id, s.pos.x, s.pos.y, s.capacity,
                       s.initial_inventory, s.holding_cost);
  for (const auto& c : inst.customers()) {
    out << fmt::format("{} {} {} {} {} {}", c.id, c.pos.x, c.pos.y, c.capacity,
                       c.initial_inventory, c.holding_cost);
    for (Quantity d : c.demand) out << ' ' << d;
    out << '\n';
  }
  for (const auto& e : inst.overrides())
    out << fmt::format("edge {} {} {}\n", e.from_id, e.to_id, e.cost);
}

std::string instance_to_string(const Instance& inst) {
  std::ostringstream ss;
  write_instance(ss, inst);
  return ss.str();
}

Quantity CustomerDelivery::total() const {
  Quantity s = 0;
  for (Quantity v : q) s += v;
  return s;
}

double rdp_holding_cost(const Instance& inst, int t, std::span<const CustomerDelivery> rdp) {
  const int tau = inst.horizon();
  double total = 0.0;
  for (const auto& d : rdp) {
    const double fh = inst.customer(d.customer).holding_cost;
    // b^h = sum_{l > h} q^l, charged for t <= h <= tau
    for (int h = t; h <= tau; ++h) {
      Quantity b = 0;
      for (int l = h + 1; l <= tau + 1; ++l) b += d.q[l];
      total += fh * static_cast<double>(b);
    }
  }
  return total;
}

double column_cost(const Instance& inst, int s, int t, std::span<const int> sequence,
                   std::span<const CustomerDelivery> rdp) {
  const int tau = inst.horizon();
  for (const auto& d : rdp) {
    if (static_cast<int>(d.q.size()) != tau + 2)
      throw ContractViolation("sub-delivery vector must have tau + 2 entries");
    const auto& tb = inst.tables(d.customer);
    for (int h = 0; h <= tau + 1; ++h) {
      if (d.q[h] == 0) continue;
      if (h < t || !tb.can_deliver(t, h) || d.q[h] < 0 || d.q[h] > tb.ub[t][h])
        throw ContractViolation(fmt::format("sub-delivery q[{}]={} to customer {} out of bounds",
                                            h, d.q[h], d.customer));
    }
  }
  return inst.route_cost(s, sequence) + rdp_holding_cost(inst, t, rdp);
}

}  // namespace teirp
