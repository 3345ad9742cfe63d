#include "teirp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

namespace teirp {

namespace {

constexpr double kCircleTol = 1e-9;

bool covers(const Circle& c, std::span<const Point> pts) {
  for (const auto& p : pts)
    if (euclidean(p, c.center) > c.radius + kCircleTol * std::max(1.0, c.radius)) return false;
  return true;
}

bool circumcircle(Point a, Point b, Point c, Circle& out) {
  const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  if (std::abs(d) < 1e-12) return false;
  const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y, c2 = c.x * c.x + c.y * c.y;
  out.center = {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  out.radius = std::max({euclidean(out.center, a), euclidean(out.center, b), euclidean(out.center, c)});
  return true;
}

std::istringstream next_line(std::istream& in, const char* what) {
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return std::istringstream(line);
  }
  throw InputError(fmt::format("source file ended before the {} line", what));
}

// Each customer's demand taken just in time from its satellite: fails when a
// period's deliveries do not fit K2 vehicles (first fit decreasing) or the
// first echelon cannot carry them.
bool jit_feasible(const Instance& inst) {
  const auto& f2 = inst.second_fleet();
  const auto& f1 = inst.first_fleet();
  for (int t = 1; t <= inst.horizon(); ++t) {
    std::vector<Quantity> items;
    Quantity total = 0;
    for (int c = 0; c < inst.num_customers(); ++c) {
      const Quantity q = inst.residual_demand(c, t);
      if (q > f2.capacity) return false;
      if (q > 0) items.push_back(q), total += q;
    }
    std::sort(items.rbegin(), items.rend());
    std::vector<Quantity> bins;
    for (Quantity q : items) {
      auto it = std::find_if(bins.begin(), bins.end(),
                             [&](Quantity load) { return load + q <= f2.capacity; });
      if (it != bins.end()) *it += q;
      else bins.push_back(q);
    }
    if (static_cast<int>(bins.size()) > f2.vehicles) return false;
    // everything ships from satellite 0, replenished in the same period
    const auto& s0 = inst.satellite(0);
    if (total > f1.capacity || (total > 0 && f1.vehicles < 1)) return false;
    if (s0.initial_inventory + total > s0.capacity) return false;
  }
  return true;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

Circle enclosing_circle(std::span<const Point> pts) {
  if (pts.empty()) throw InputError("enclosing circle of an empty point set");
  Circle best{pts[0], 0.0};
  if (covers(best, pts)) return best;
  best.radius = std::numeric_limits<double>::infinity();
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Circle c{{(pts[i].x + pts[j].x) / 2, (pts[i].y + pts[j].y) / 2},
               euclidean(pts[i], pts[j]) / 2};
      if (c.radius < best.radius && covers(c, pts)) best = c;
      for (std::size_t k = j + 1; k < n; ++k) {
        Circle cc;
        if (circumcircle(pts[i], pts[j], pts[k], cc) && cc.radius < best.radius && covers(cc, pts))
          best = cc;
      }
    }
  return best;
}

std::vector<Point> place_facilities(Point center, double radius, int count, double inner,
                                    double outer, Rng& rng) {
  if (count < 1) throw InputError("facility count must be positive");
  if (!(inner > 0 && inner < outer)) throw InputError("ring radii must satisfy 0 < inner < outer");
  if (radius <= 0) radius = 1.0;
  std::vector<Point> out;
  const double sector = 2.0 * std::numbers::pi / count;
  for (int i = 0; i < count; ++i) {
    const double angle = sector * (i + rng.unit());
    const double r = radius * rng.uniform(inner, outer);
    out.push_back({center.x + r * std::cos(angle), center.y + r * std::sin(angle)});
  }
  return out;
}

SourceIrp read_source_irp(std::istream& in) {
  SourceIrp src;
  int nodes = 0;
  {
    auto ss = next_line(in, "header");
    ss >> nodes >> src.horizon >> src.vehicle_capacity;
    if (ss.fail() || nodes < 1 || src.horizon < 1) throw InputError("malformed source header");
  }
  {
    auto ss = next_line(in, "supplier");
    int id;
    ss >> id >> src.supplier.x >> src.supplier.y >> src.supplier_capacity >> src.production >>
        src.supplier_holding;
    if (ss.fail()) throw InputError("malformed source supplier line");
  }
  for (int i = 1; i < nodes; ++i) {
    auto ss = next_line(in, "customer");
    CustomerData c;
    Quantity min_level, demand;
    ss >> c.id >> c.pos.x >> c.pos.y >> c.initial_inventory >> c.capacity >> min_level >> demand >>
        c.holding_cost;
    if (ss.fail()) throw InputError(fmt::format("malformed source customer line {}", i));
    c.demand.assign(src.horizon, demand);
    src.customers.push_back(std::move(c));
  }
  return src;
}

SourceIrp read_source_irp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open source file {}", path));
  return read_source_irp(in);
}

CapacityPlan derive_capacities(Quantity supplier_capacity, Quantity production,
                               Quantity vehicle_capacity, Quantity total_residual_demand,
                               int suppliers, int satellites, int k2, Rng& rng,
                               std::span<const double> coefficients) {
  if (suppliers < 1 || satellites < 1 || k2 < 1) throw InputError("fleet and facility counts must be positive");
  if (supplier_capacity < 0 || production < 0 || vehicle_capacity < 0)
    throw InputError("source capacities must be nonnegative");
  if (!coefficients.empty() && static_cast<int>(coefficients.size()) != satellites)
    throw InputError("one coefficient per satellite expected");
  CapacityPlan plan;
  const Quantity cap = supplier_capacity + production;
  for (int s = 0; s < satellites; ++s) {
    const double coef = coefficients.empty() ? rng.uniform(0.4, 0.6) : coefficients[s];
    const double share = coef * static_cast<double>(total_residual_demand) / satellites;
    plan.satellite_capacity.push_back(cap);
    plan.satellite_initial.push_back(std::min<Quantity>(cap, std::llround(share)));
  }
  plan.first = {suppliers, 2 * production};
  plan.second = {k2, vehicle_capacity / k2};
  return plan;
}

Instance transform_source(const SourceIrp& src, const GenConfig& cfg) {
  if (src.customers.empty()) throw InputError("source has no customers");
  Rng rng(cfg.seed);
  std::vector<Point> pts;
  for (const auto& c : src.customers) pts.push_back(c.pos);
  const auto circle = enclosing_circle(pts);
  const auto sat_pos = place_facilities(circle.center, circle.radius, cfg.satellites, 0.90, 0.99, rng);
  const auto sup_pos = place_facilities(circle.center, circle.radius, cfg.suppliers, 2.50, 3.00, rng);
  Quantity residual = 0;
  for (const auto& c : src.customers) {
    InventoryProfile p{c.initial_inventory, c.capacity, c.demand};
    for (Quantity d : residual_demand(p)) residual += d;
  }
  const auto plan = derive_capacities(src.supplier_capacity, src.production, src.vehicle_capacity,
                                      residual, cfg.suppliers, cfg.satellites, cfg.k2, rng);
  int id = 1;
  std::vector<SupplierData> sup;
  for (const auto& p : sup_pos) sup.push_back({id++, p});
  std::vector<SatelliteData> sat;
  for (int s = 0; s < cfg.satellites; ++s)
    sat.push_back({id++, sat_pos[s], plan.satellite_capacity[s], plan.satellite_initial[s],
                   src.supplier_holding});
  std::vector<CustomerData> cus = src.customers;
  for (auto& c : cus) c.id = id++;
  return Instance(std::move(sup), std::move(sat), std::move(cus), src.horizon, plan.first,
                  plan.second);
}

Instance generate_micro(const MicroConfig& cfg) {
  if (cfg.customers < 1 || cfg.customers > 8) throw InputError("micro instances have 1..8 customers");
  if (cfg.horizon < 1 || cfg.horizon > 4) throw InputError("micro instances have 1..4 periods");
  Rng rng(cfg.seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    SourceIrp src;
    src.horizon = cfg.horizon;
    Quantity peak = 0;
    std::vector<Quantity> per_period(cfg.horizon, 0);
    for (int i = 0; i < cfg.customers; ++i) {
      CustomerData c;
      c.id = i + 1;
      c.pos = {static_cast<double>(rng.integer(0, 100)), static_cast<double>(rng.integer(0, 100))};
      Quantity dmax = 0;
      for (int h = 0; h < cfg.horizon; ++h) {
        const Quantity d = rng.integer(1, 10);
        c.demand.push_back(d);
        per_period[h] += d;
        dmax = std::max(dmax, d);
      }
      c.capacity = std::max<Quantity>(1, dmax) * rng.integer(2, 3);
      c.initial_inventory = rng.integer(0, c.capacity / 2);
      c.holding_cost = round2(rng.uniform(0.1, 0.5));
      src.customers.push_back(std::move(c));
    }
    for (Quantity p : per_period) peak = std::max(peak, p);
    src.production = std::max<Quantity>(1, peak);
    src.supplier_capacity = src.production;
    src.vehicle_capacity = std::max<Quantity>(cfg.k2, (13 * src.production + 9) / 10);
    src.supplier_holding = round2(rng.uniform(0.01, 0.1));
    GenConfig gc{cfg.suppliers, cfg.satellites, cfg.k2, rng.next()};
    auto inst = transform_source(src, gc);
    if (inst.check_invariants().empty() && jit_feasible(inst)) return inst;
  }
  throw InputError("no feasible micro instance after 100 draws");
}

}  // namespace teirp
