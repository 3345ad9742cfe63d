#include "teirp/solution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "teirp/common.hpp"

namespace teirp {

using nlohmann::json;

json plan_to_json(const Plan& plan) {
  json first = json::array();
  for (const auto& r : plan.first)
    first.push_back({{"period", r.period}, {"supplier", r.supplier}, {"satellites", r.satellites}, {"cost", r.cost}});
  json second = json::array();
  for (const auto& r : plan.second) {
    json dels = json::array();
    for (const auto& d : r.deliveries) dels.push_back({{"customer", d.customer}, {"q", d.q}});
    second.push_back({{"period", r.period},
                      {"satellite", r.satellite},
                      {"customers", r.customers},
                      {"cost", r.cost},
                      {"deliveries", dels}});
  }
  json psi = json::array();
  for (const auto& p : plan.psi)
    psi.push_back({{"satellite", p.satellite}, {"from", p.from}, {"to", p.to}, {"value", p.value}});
  return {{"firstEchelonRoutes", first}, {"columns", second}, {"psi", psi}};
}

Plan plan_from_json(const json& j) {
  try {
    Plan plan;
    for (const auto& r : j.at("firstEchelonRoutes"))
      plan.first.push_back({r.at("period").get<int>(), r.at("supplier").get<int>(),
                            r.at("satellites").get<std::vector<int>>(), r.at("cost").get<double>()});
    for (const auto& r : j.at("columns")) {
      SecondEchelonUse u;
      u.period = r.at("period").get<int>();
      u.satellite = r.at("satellite").get<int>();
      u.customers = r.at("customers").get<std::vector<int>>();
      u.cost = r.at("cost").get<double>();
      for (const auto& d : r.at("deliveries"))
        u.deliveries.push_back({d.at("customer").get<int>(), d.at("q").get<std::vector<double>>()});
      plan.second.push_back(std::move(u));
    }
    for (const auto& p : j.at("psi"))
      plan.psi.push_back({p.at("satellite").get<int>(), p.at("from").get<int>(), p.at("to").get<int>(),
                          p.at("value").get<double>()});
    return plan;
  } catch (const json::exception& e) {
    throw InputError(fmt::format("solution schema: {}", e.what()));
  }
}

namespace {

class Checker {
 public:
  Checker(const Instance& inst, const Plan& plan, double tol) : inst_(inst), plan_(plan), tol_(tol) {
    tau_ = inst.horizon();
  }

  Validation run() {
    schema();
    if (!res_.schema_errors.empty()) return res_;
    const double first = first_echelon();
    const double travel = second_echelon();
    const double sat_hold = satellites();
    const double cus_hold = customers();
    const double total = first + travel + sat_hold + cus_hold;
    if (std::abs(total - plan_.objective) > tol_ * std::max(1.0, std::abs(total)))
      bad("cost audit: recomputed {:.9f}, reported {:.9f}", total, plan_.objective);
    return res_;
  }

 private:
  template <class... A>
  void bad(fmt::format_string<A...> f, A&&... a) {
    res_.violations.push_back(fmt::format(f, std::forward<A>(a)...));
  }
  template <class... A>
  void schema_bad(fmt::format_string<A...> f, A&&... a) {
    res_.schema_errors.push_back(fmt::format(f, std::forward<A>(a)...));
  }

  void schema() {
    for (const auto& r : plan_.first) {
      if (r.period < 1 || r.period > tau_) schema_bad("first-echelon route period {} out of range", r.period);
      if (inst_.supplier_index(r.supplier) < 0) schema_bad("unknown supplier {}", r.supplier);
      for (int s : r.satellites)
        if (inst_.satellite_index(s) < 0) schema_bad("unknown satellite {}", s);
    }
    for (const auto& r : plan_.second) {
      if (r.period < 1 || r.period > tau_) schema_bad("route period {} out of range", r.period);
      if (inst_.satellite_index(r.satellite) < 0) schema_bad("unknown satellite {}", r.satellite);
      for (int c : r.customers)
        if (inst_.customer_index(c) < 0) schema_bad("unknown customer {}", c);
      for (const auto& d : r.deliveries) {
        if (inst_.customer_index(d.customer) < 0) schema_bad("unknown customer {}", d.customer);
        if (static_cast<int>(d.q.size()) != tau_ + 2) schema_bad("q vector of customer {} has wrong size", d.customer);
      }
    }
    for (const auto& p : plan_.psi) {
      if (inst_.satellite_index(p.satellite) < 0) schema_bad("unknown satellite {}", p.satellite);
      if (p.from < 0 || p.from > tau_ || p.to < std::max(p.from, 1) || p.to > tau_ + 1)
        schema_bad("psi period pair ({}, {}) out of range", p.from, p.to);
    }
  }

  double first_echelon() {
    const int ns = inst_.num_satellites();
    double cost = 0.0;
    route_of_.assign(ns, std::vector<int>(tau_ + 1, -1));
    std::vector<int> used(tau_ + 1, 0);
    for (std::size_t k = 0; k < plan_.first.size(); ++k) {
      const auto& r = plan_.first[k];
      ++used[r.period];
      int prev = inst_.supplier_vertex(inst_.supplier_index(r.supplier));
      double c = 0.0;
      for (int id : r.satellites) {
        const int s = inst_.satellite_index(id);
        if (route_of_[s][r.period] >= 0) bad("satellite {} served twice in period {}", id, r.period);
        route_of_[s][r.period] = static_cast<int>(k);
        c += inst_.cost(prev, inst_.satellite_vertex(s));
        prev = inst_.satellite_vertex(s);
      }
      if (!r.satellites.empty()) c += inst_.cost(prev, inst_.supplier_vertex(inst_.supplier_index(r.supplier)));
      if (std::abs(c - r.cost) > tol_ * std::max(1.0, c)) bad("first-echelon route cost {} reported as {}", c, r.cost);
      cost += c;
    }
    for (int t = 1; t <= tau_; ++t)
      if (used[t] > inst_.first_fleet().vehicles) bad("period {} uses {} first-echelon vehicles", t, used[t]);
    return cost;
  }

  double second_echelon() {
    const int nn = inst_.num_customers(), ns = inst_.num_satellites();
    delivered_.assign(nn, std::vector<double>(tau_ + 1, 0.0));
    outflow_.assign(ns, std::vector<double>(tau_ + 1, 0.0));
    std::vector<std::vector<int>> visits(nn, std::vector<int>(tau_ + 1, 0));
    std::vector<int> used(tau_ + 1, 0);
    double travel = 0.0;
    for (const auto& r : plan_.second) {
      ++used[r.period];
      const int s = inst_.satellite_index(r.satellite);
      std::vector<int> seq;
      for (int id : r.customers) seq.push_back(inst_.customer_index(id));
      std::set<int> distinct(seq.begin(), seq.end());
      if (distinct.size() != seq.size()) bad("route from satellite {} in period {} repeats a customer", r.satellite, r.period);
      for (int c : distinct) ++visits[c][r.period];
      travel += inst_.route_cost(s, seq);
      double load = 0.0;
      for (const auto& d : r.deliveries) {
        const int c = inst_.customer_index(d.customer);
        if (!distinct.count(c)) bad("delivery to customer {} not on the route", d.customer);
        for (double q : d.q) {
          if (q < -tol_) bad("negative quantity for customer {}", d.customer);
          load += q;
          delivered_[c][r.period] += q;
        }
      }
      if (load > static_cast<double>(inst_.second_fleet().capacity) + tol_)
        bad("route from satellite {} in period {} carries {} > Q2", r.satellite, r.period, load);
      outflow_[s][r.period] += load;
    }
    for (int t = 1; t <= tau_; ++t) {
      if (used[t] > inst_.second_fleet().vehicles) bad("period {} uses {} second-echelon vehicles", t, used[t]);
      for (int c = 0; c < nn; ++c)
        if (visits[c][t] > 1) bad("customer {} visited {} times in period {}", inst_.customer(c).id, visits[c][t], t);
    }
    return travel;
  }

  double satellites() {
    const int ns = inst_.num_satellites();
    std::vector<std::vector<double>> inflow(ns, std::vector<double>(tau_ + 2, 0.0));
    std::vector<std::vector<double>> out(ns, std::vector<double>(tau_ + 2, 0.0));
    std::vector<double> initial(ns, 0.0);
    for (const auto& p : plan_.psi) {
      const int s = inst_.satellite_index(p.satellite);
      if (p.value < -tol_) bad("negative psi for satellite {}", p.satellite);
      if (p.from == 0) initial[s] += p.value;
      else inflow[s][p.from] += p.value;
      out[s][p.to] += p.value;
    }
    double hold = 0.0;
    std::vector<double> route_load(plan_.first.size(), 0.0);
    for (int s = 0; s < ns; ++s) {
      const auto& sd = inst_.satellite(s);
      const double scale = std::max(1.0, static_cast<double>(sd.capacity));
      if (std::abs(initial[s] - static_cast<double>(sd.initial_inventory)) > tol_ * scale)
        bad("satellite {} initial stock flows sum to {} instead of {}", sd.id, initial[s], sd.initial_inventory);
      double stock = static_cast<double>(sd.initial_inventory);
      for (int t = 1; t <= tau_; ++t) {
        if (std::abs(out[s][t] - outflow_[s][t]) > tol_ * scale)
          bad("satellite {} period {}: stock flows ship {} but routes carry {}", sd.id, t, out[s][t], outflow_[s][t]);
        if (route_of_[s][t] >= 0 && inflow[s][t] < 1.0 - tol_)
          bad("satellite {} visited in period {} but receives {}", sd.id, t, inflow[s][t]);
        if (inflow[s][t] > tol_) {
          if (route_of_[s][t] < 0) bad("satellite {} receives goods in period {} without a visit", sd.id, t);
          else route_load[route_of_[s][t]] += inflow[s][t];
        }
        if (stock + inflow[s][t] > static_cast<double>(sd.capacity) + tol_ * scale)
          bad("satellite {} over capacity in period {}", sd.id, t);
        stock += inflow[s][t] - outflow_[s][t];
        if (stock < -tol_ * scale) bad("satellite {} stock negative in period {}", sd.id, t);
        hold += sd.holding_cost * stock;
      }
    }
    for (std::size_t k = 0; k < route_load.size(); ++k)
      if (route_load[k] > static_cast<double>(inst_.first_fleet().capacity) + tol_)
        bad("first-echelon route {} carries {} > Q1", k, route_load[k]);
    return hold;
  }

  double customers() {
    double hold = 0.0;
    for (int c = 0; c < inst_.num_customers(); ++c) {
      const auto& cd = inst_.customer(c);
      const auto& tb = inst_.tables(c);
      double stock = static_cast<double>(cd.initial_inventory);
      for (int t = 1; t <= tau_; ++t) {
        if (stock + delivered_[c][t] > static_cast<double>(cd.capacity) + tol_)
          bad("customer {} over capacity in period {}", cd.id, t);
        stock += delivered_[c][t] - static_cast<double>(inst_.demand(c, t));
        if (stock < -tol_) bad("customer {} short by {} in period {}", cd.id, -stock, t);
        // only goods delivered during the horizon are charged
        hold += cd.holding_cost * (stock - static_cast<double>(tb.residual_inventory[t]));
      }
    }
    return hold;
  }

  const Instance& inst_;
  const Plan& plan_;
  double tol_;
  int tau_ = 0;
  Validation res_;
  std::vector<std::vector<int>> route_of_;
  std::vector<std::vector<double>> delivered_, outflow_;
};

}  // namespace

Validation validate_plan(const Instance& inst, const Plan& plan, double tolerance) {
  return Checker(inst, plan, tolerance).run();
}

Validation validate_report(const Instance& inst, const json& report, double tolerance) {
  Validation v;
  if (!report.is_object() || !report.contains("solution") || report["solution"].is_null()) {
    v.schema_errors.push_back("report has no solution");
    return v;
  }
  if (!report.contains("objective") || !report["objective"].is_number()) {
    v.schema_errors.push_back("report has no numeric objective");
    return v;
  }
  Plan plan;
  try {
    plan = plan_from_json(report["solution"]);
  } catch (const InputError& e) {
    v.schema_errors.push_back(e.what());
    return v;
  }
  plan.objective = report["objective"].get<double>();
  return validate_plan(inst, plan, tolerance);
}

}  // namespace teirp
