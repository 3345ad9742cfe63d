#include "teirp/bnp.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include <fmt/format.h>

#include "teirp/log.hpp"

namespace teirp {

using nlohmann::json;

namespace {

double frac_distance(double v) {
  const double f = v - std::floor(v);
  return std::abs(f - 0.5);
}

bool fractional(double v, double tol) {
  const double f = v - std::floor(v);
  return f > tol && f < 1.0 - tol;
}

BranchCandidate candidate(DecisionType type, double value) {
  BranchCandidate c;
  c.decision.type = type;
  c.value = value;
  return c;
}

}  // namespace

std::vector<BranchCandidate> branch_candidates(const Master& m) {
  const Instance& inst = m.instance();
  const int tau = inst.horizon(), ns = inst.num_satellites(), nn = inst.num_customers();
  const auto& routes = m.routes();
  std::vector<BranchCandidate> out;

  double total1 = 0.0;
  std::vector<double> per_period1(tau + 1, 0.0), per_sat(ns, 0.0);
  for (std::size_t p = 0; p < routes.size(); ++p)
    for (int t = 1; t <= tau; ++t) {
      const double v = m.lambda(static_cast<int>(p), t);
      total1 += v;
      per_period1[t] += v;
      for (int s = 0; s < ns; ++s)
        if (routes[p].visits(s)) per_sat[s] += v;
    }
  out.push_back(candidate(DecisionType::kFirstTotal, total1));
  for (int t = 1; t <= tau; ++t) {
    auto c = candidate(DecisionType::kFirstPeriod, per_period1[t]);
    c.decision.period = t;
    out.push_back(c);
  }
  for (int s = 0; s < ns; ++s) {
    auto c = candidate(DecisionType::kSatelliteFlow, per_sat[s]);
    c.decision.satellite = s;
    out.push_back(c);
  }
  for (std::size_t p = 0; p < routes.size(); ++p)
    for (int t = 1; t <= tau; ++t) {
      auto c = candidate(DecisionType::kFirstRoute, m.lambda(static_cast<int>(p), t));
      c.decision.route = static_cast<int>(p);
      c.decision.period = t;
      out.push_back(c);
    }

  double total2 = 0.0;
  std::vector<double> per_period2(tau + 1, 0.0), cus(nn, 0.0);
  std::vector<std::vector<double>> cus_t(nn, std::vector<double>(tau + 1, 0.0));
  std::vector<std::vector<std::vector<double>>> cus_ts(
      nn, std::vector<std::vector<double>>(tau + 1, std::vector<double>(ns, 0.0)));
  std::map<std::tuple<int, int, int>, double> edges;  // (t, a, b)
  const auto& pool = m.pool();
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const double a = m.alpha(static_cast<int>(k));
    if (a <= 0.0) continue;
    const Column& col = pool[k];
    const int t = col.period;
    total2 += a;
    per_period2[t] += a;
    for (int c : col.sequence) {
      cus[c] += a;
      cus_t[c][t] += a;
      cus_ts[c][t][col.satellite] += a;
    }
    int prev = inst.satellite_vertex(col.satellite);
    auto step = [&](int v) {
      edges[{t, std::min(prev, v), std::max(prev, v)}] += a;
      prev = v;
    };
    for (int c : col.sequence) step(inst.customer_vertex(c));
    step(inst.satellite_vertex(col.satellite));
  }
  out.push_back(candidate(DecisionType::kSecondTotal, total2));
  for (int t = 1; t <= tau; ++t) {
    auto c = candidate(DecisionType::kSecondPeriod, per_period2[t]);
    c.decision.period = t;
    out.push_back(c);
  }
  for (int i = 0; i < nn; ++i) {
    auto c = candidate(DecisionType::kCustomerFlow, cus[i]);
    c.decision.customer = i;
    out.push_back(c);
  }
  for (int i = 0; i < nn; ++i)
    for (int t = 1; t <= tau; ++t) {
      auto c = candidate(DecisionType::kCustomerPeriod, cus_t[i][t]);
      c.decision.customer = i;
      c.decision.period = t;
      out.push_back(c);
    }
  for (int i = 0; i < nn; ++i)
    for (int t = 1; t <= tau; ++t)
      for (int s = 0; s < ns; ++s) {
        auto c = candidate(DecisionType::kCustomerSatellite, cus_ts[i][t][s]);
        c.decision.customer = i;
        c.decision.period = t;
        c.decision.satellite = s;
        out.push_back(c);
      }
  for (const auto& [key, v] : edges) {
    auto c = candidate(DecisionType::kEdge, v);
    c.decision.period = std::get<0>(key);
    c.decision.vertex_a = std::get<1>(key);
    c.decision.vertex_b = std::get<2>(key);
    out.push_back(c);
  }
  return out;
}

std::optional<BranchCandidate> select_branch(const std::vector<BranchCandidate>& cands, double tol) {
  auto type_of = [](const BranchCandidate& c) { return static_cast<int>(c.decision.type); };
  // candidates arrive in (type, index) order; strict improvement keeps the first on ties
  std::optional<BranchCandidate> first_level;
  for (const auto& c : cands) {
    if (type_of(c) > 4 || !fractional(c.value, tol)) continue;
    if (type_of(c) == 1) return c;
    if (!first_level || frac_distance(c.value) < frac_distance(first_level->value)) first_level = c;
  }
  if (first_level) return first_level;
  std::map<int, BranchCandidate> best;
  for (const auto& c : cands) {
    const int type = type_of(c);
    if (type < 5 || !fractional(c.value, tol)) continue;
    auto it = best.find(type);
    if (it == best.end() || frac_distance(c.value) < frac_distance(it->second.value)) best[type] = c;
  }
  for (int type : {7, 8, 9, 10}) {
    auto it = best.find(type);
    if (it != best.end() && frac_distance(it->second.value) <= 0.25) return it->second;
  }
  std::optional<BranchCandidate> overall;
  for (const auto& [type, c] : best)
    if (!overall || frac_distance(c.value) < frac_distance(overall->value)) overall = c;
  return overall;
}

std::optional<double> relative_gap(std::optional<double> lb, std::optional<double> ub) {
  if (!lb || !ub) return std::nullopt;
  if (std::abs(*ub - *lb) <= 1e-9 * std::max(1.0, std::abs(*ub))) return 0.0;
  if (*lb <= 0.0) return std::nullopt;
  return (*ub - *lb) / *lb;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<int> satellite_ids(const Instance& inst, const FirstEchelonRoute& r) {
  std::vector<int> ids;
  for (int s : r.satellites) ids.push_back(inst.satellite(s).id);
  return ids;
}

Plan assemble(const Master& m, const std::vector<std::vector<double>>& lambda,
              const std::vector<std::pair<int, double>>& columns,
              const std::vector<std::vector<std::vector<double>>>& psi, double objective) {
  const Instance& inst = m.instance();
  const int tau = inst.horizon();
  Plan plan;
  plan.objective = objective;
  for (int t = 1; t <= tau; ++t)
    for (std::size_t p = 0; p < m.routes().size(); ++p)
      if (lambda[p][t] > 0.5) {
        const auto& r = m.routes()[p];
        plan.first.push_back({t, inst.suppliers()[r.supplier].id, satellite_ids(inst, r), r.cost});
      }
  std::map<std::string, std::size_t> by_route;
  for (const auto& [k, a] : columns) {
    const Column& col = m.pool()[k];
    auto [it, fresh] = by_route.emplace(route_key(col), plan.second.size());
    if (fresh) {
      SecondEchelonUse u;
      u.period = col.period;
      u.satellite = inst.satellite(col.satellite).id;
      for (int c : col.sequence) u.customers.push_back(inst.customer(c).id);
      for (const auto& d : col.deliveries)
        u.deliveries.push_back({inst.customer(d.customer).id, std::vector<double>(tau + 2, 0.0)});
      plan.second.push_back(std::move(u));
    }
    auto& u = plan.second[it->second];
    u.cost += a * col.cost;
    for (std::size_t i = 0; i < col.deliveries.size(); ++i)
      for (int h = 0; h <= tau + 1; ++h) u.deliveries[i].q[h] += a * static_cast<double>(col.deliveries[i].q[h]);
  }
  std::stable_sort(plan.second.begin(), plan.second.end(), [](const auto& a, const auto& b) {
    return std::tie(a.period, a.satellite, a.customers) < std::tie(b.period, b.satellite, b.customers);
  });
  for (int s = 0; s < inst.num_satellites(); ++s)
    for (int l = 0; l <= tau; ++l)
      for (int h = std::max(l, 1); h <= tau + 1; ++h)
        if (psi[s][l][h] > 1e-9) plan.psi.push_back({inst.satellite(s).id, l, h, psi[s][l][h]});
  return plan;
}

}  // namespace

Plan plan_from_master(const Master& m) {
  const Instance& inst = m.instance();
  const int tau = inst.horizon();
  std::vector<std::vector<double>> lambda(m.routes().size(), std::vector<double>(tau + 2, 0.0));
  for (std::size_t p = 0; p < m.routes().size(); ++p)
    for (int t = 1; t <= tau; ++t) lambda[p][t] = m.lambda(static_cast<int>(p), t);
  std::vector<std::pair<int, double>> cols;
  for (std::size_t k = 0; k < m.pool().size(); ++k)
    if (double a = m.alpha(static_cast<int>(k)); a > 1e-9) cols.emplace_back(static_cast<int>(k), a);
  std::vector<std::vector<std::vector<double>>> psi(
      inst.num_satellites(), std::vector<std::vector<double>>(tau + 2, std::vector<double>(tau + 2, 0.0)));
  for (int s = 0; s < inst.num_satellites(); ++s)
    for (int l = 0; l <= tau; ++l)
      for (int h = std::max(l, 1); h <= tau + 1; ++h) psi[s][l][h] = m.psi(s, l, h);
  return assemble(m, lambda, cols, psi, m.objective());
}

Plan plan_from_integer(const Master& m, const IntegerSolution& sol) {
  return assemble(m, sol.lambda, sol.columns, sol.psi, sol.objective);
}

json report_to_json(const SolveReport& r, bool timing) {
  json j;
  j["status"] = r.status;
  j["objective"] = opt(r.objective);
  j["lb"] = opt(r.lb);
  j["ub"] = opt(r.ub);
  j["gap0"] = opt(r.gap0);
  j["gap20"] = opt(r.gap20);
  j["gapF"] = opt(r.gap_f);
  j["nodes"] = r.nodes;
  j["rootBound"] = r.root_bound;
  j["timeRootSec"] = timing ? json(r.time_root) : json(nullptr);
  j["timeTotalSec"] = timing ? json(r.time_total) : json(nullptr);
  j["solution"] = r.solution ? plan_to_json(*r.solution) : json(nullptr);
  return j;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  long id = 0;
  int depth = 0;
  double bound = 0.0;  // parent bound until solved
  std::vector<BranchDecision> decisions;
  std::shared_ptr<const SavedBasis> warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    if (a.depth != b.depth) return a.depth > b.depth;
    return a.id < b.id;
  }
};

bool route_integral(const Master& m, double tol) {
  std::map<std::string, double> total;
  for (std::size_t k = 0; k < m.pool().size(); ++k) {
    const double a = m.alpha(static_cast<int>(k));
    if (a <= tol) continue;
    if (!m.pool()[k].elementary()) return false;
    total[route_key(m.pool()[k])] += a;
  }
  for (const auto& [key, v] : total)
    if (fractional(v, tol)) return false;
  return true;
}

class Search {
 public:
  Search(const Instance& inst, const BnpOptions& opts)
      : inst_(inst), opts_(opts), master_(inst, enumerate_first_echelon(inst)) {}

  SolveReport run() {
    start_ = Clock::now();
    deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opts_.time_limit));
    colgen_ = opts_.colgen;
    colgen_.deadline = deadline_;
    for (auto& c : initial_columns(inst_)) master_.add_column(std::move(c));

    open_.insert(Node{next_id_++, 0, -std::numeric_limits<double>::infinity(), {}, nullptr});
    std::optional<Node> dive;
    std::string stop;
    while (!open_.empty() || dive) {
      if (Clock::now() >= deadline_) {
        stop = "timeout";
        break;
      }
      if (report_.nodes >= opts_.node_limit) {
        stop = "node_limit";
        break;
      }
      Node node;
      if (dive) {
        node = std::move(*dive);
        dive.reset();
      } else {
        node = *open_.begin();
        open_.erase(open_.begin());
      }
      if (ub_ && node.bound >= *ub_ - opts_.prune_tolerance) continue;
      current_bound_ = node.bound;
      processing_ = true;
      auto children = process(node, stop);
      processing_ = false;
      if (!stop.empty()) {
        // the node was not finished: its parent bound still holds
        open_.insert(node);
        break;
      }
      if (children.empty()) continue;
      if (opts_.search == SearchMode::kLocalDepthFirst) {
        dive = std::move(children[0]);
        open_.insert(std::move(children[1]));
      } else {
        for (auto& c : children) open_.insert(std::move(c));
      }
      if (dive && ub_ && dive->bound >= *ub_ - opts_.prune_tolerance) dive.reset();
    }
    if (dive) open_.insert(std::move(*dive));
    finish(stop);
    return report_;
  }

 private:
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  std::optional<double> global_lb() const {
    std::optional<double> lb;
    for (const auto& n : open_) lb = lb ? std::min(*lb, n.bound) : n.bound;
    if (processing_) lb = lb ? std::min(*lb, current_bound_) : current_bound_;
    if (!lb) return ub_;
    if (ub_) lb = std::min(*lb, *ub_);
    return lb;
  }

  void offer(const Plan& plan) {
    if (ub_ && plan.objective >= *ub_ - 1e-9) return;
    ub_ = plan.objective;
    incumbent_ = plan;
    logger()->info("incumbent {:.6f}", plan.objective);
  }

  void integer_rmp() {
    const double left = std::chrono::duration<double>(deadline_ - Clock::now()).count();
    const double seconds = std::max(0.0, std::min(opts_.integer_rmp_seconds, left));
    if (seconds <= 0.0) return;
    const auto t0 = Clock::now();
    auto sol = master_.solve_integer(seconds, opts_.integer_rmp_nodes);
    logger()->debug("integer RMP over {} columns: {} after {:.2f}s ({} nodes)", master_.pool().size(),
                    sol ? fmt::format("{:.6f}", sol->objective) : std::string("nothing"),
                    std::chrono::duration<double>(Clock::now() - t0).count(), sol ? sol->nodes : 0);
    if (sol) offer(plan_from_integer(master_, *sol));
  }

  std::vector<Node> process(const Node& node, std::string& stop) {
    master_.set_decisions(node.decisions, node.warm.get());
    const auto st = run_column_generation(master_, colgen_, &memory_);
    if (st.status == ColgenStatus::kTimeout) {
      stop = "timeout";
      return {};
    }
    if (st.status == ColgenStatus::kIterationLimit || st.status == ColgenStatus::kLpFailure) {
      stop = to_string(st.status);
      return {};
    }
    ++report_.nodes;
    if (st.aborted_subproblems > 0)
      logger()->warn("node {}: {} pricing runs hit the label cap, bound not proven", node.id, st.aborted_subproblems);
    const bool root = node.depth == 0;
    std::vector<Node> children;
    if (st.status == ColgenStatus::kInfeasible) {
      logger()->debug("node {} infeasible", node.id);
      if (root) root_infeasible_ = true;
    } else {
      const double bound = std::max(node.bound, st.objective);
      current_bound_ = bound;
      if (st.objective < node.bound - 1e-6)
        logger()->warn("node {} bound {} below parent bound {}", node.id, st.objective, node.bound);
      if (root) {
        report_.root_bound = st.objective;
        report_.time_root = elapsed();
      }
      logger()->debug("node {} depth {} bound {:.6f} columns {}", node.id, node.depth, bound, master_.pool().size());
      if (!ub_ || bound < *ub_ - opts_.prune_tolerance) {
        const auto pick = select_branch(branch_candidates(master_));
        if (!pick) {
          if (!route_integral(master_, 1e-6))
            throw ContractViolation("integral branching families with a fractional route");
          Plan plan = plan_from_master(master_);
          plan.objective = st.objective;
          offer(plan);
        } else {
          auto warm = std::make_shared<const SavedBasis>(master_.save_basis());
          const double v = pick->value;
          Node down{next_id_++, node.depth + 1, bound, node.decisions, warm};
          Node up{next_id_++, node.depth + 1, bound, node.decisions, warm};
          BranchDecision d = pick->decision;
          d.sense = lp::Sense::kLessEqual;
          d.rhs = std::floor(v);
          down.decisions.push_back(d);
          d.sense = lp::Sense::kGreaterEqual;
          d.rhs = std::ceil(v);
          up.decisions.push_back(d);
          // the dive follows the rounding direction of the value
          if (v - std::floor(v) >= 0.5) children = {std::move(up), std::move(down)};
          else children = {std::move(down), std::move(up)};
        }
      }
    }
    if (root) {
      integer_rmp();
      processing_ = false;
      for (auto& c : children) open_.insert(c);
      report_.gap0 = relative_gap(children.empty() ? ub_ : std::optional<double>(current_bound_), ub_);
      for (const auto& c : children) open_.erase(c);
    } else if (report_.nodes == opts_.integer_rmp_after) {
      integer_rmp();
      processing_ = false;
      for (auto& c : children) open_.insert(c);
      report_.gap20 = relative_gap(global_lb(), ub_);
      for (const auto& c : children) open_.erase(c);
    }
    return children;
  }

  void finish(const std::string& stop) {
    report_.time_total = elapsed();
    report_.ub = ub_;
    report_.lb = global_lb();
    if (stop.empty() && open_.empty() && ub_) report_.lb = ub_;
    report_.gap_f = relative_gap(report_.lb, report_.ub);
    if (incumbent_) {
      report_.objective = incumbent_->objective;
      report_.solution = incumbent_;
    }
    if (!stop.empty()) report_.status = ub_ ? stop : "no_solution";
    else if (ub_) report_.status = "optimal";
    else report_.status = root_infeasible_ ? "infeasible" : "no_solution";
    if (!ub_ && stop.empty()) report_.lb.reset();
  }

  const Instance& inst_;
  const BnpOptions& opts_;
  ColgenOptions colgen_;
  Master master_;
  PricingMemory memory_;
  std::set<Node, NodeOrder> open_;
  long next_id_ = 0;
  Clock::time_point start_, deadline_;
  std::optional<double> ub_;
  std::optional<Plan> incumbent_;
  bool processing_ = false;
  double current_bound_ = 0.0;
  bool root_infeasible_ = false;
  SolveReport report_;
};

}  // namespace

SolveReport branch_and_price(const Instance& inst, const BnpOptions& opts) {
  return Search(inst, opts).run();
}

}  // namespace teirp
