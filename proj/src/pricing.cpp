#include "teirp/pricing.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace teirp {

double delivery_rate(const Instance& inst, int s, int t, int c, int h, const DualPrices& duals) {
  const int tau = inst.horizon();
  double rho = duals.outflow[s][t] - duals.demand[c][h];
  for (int l = t; l < h && l <= tau; ++l)
    rho += inst.customer(c).holding_cost - duals.capacity[c][l];
  return rho;
}

namespace {

bool cdp_dominates(const Cdp& a, const Cdp& b) {
  Label la, lb;
  la.cost = a.cost, la.load = a.load, la.part = a.part(), la.rate = a.rate, la.max_partial = a.max_partial;
  lb.cost = b.cost, lb.load = b.load, lb.part = b.part(), lb.rate = b.rate, lb.max_partial = b.max_partial;
  return dominates(la, lb);
}

}  // namespace

std::vector<Cdp> enumerate_cdps(const Instance& inst, int s, int t, int c, const DualPrices& duals,
                                bool prune) {
  const int tau = inst.horizon();
  const auto& tb = inst.tables(c);
  std::vector<int> hs;
  for (int h : tb.delivery_periods[t])
    if (tb.ub[t][h] > 0) hs.push_back(h);
  std::vector<double> rho;
  for (int h : hs) rho.push_back(delivery_rate(inst, s, t, c, h, duals));
  std::vector<Cdp> out;
  std::vector<int> kind(hs.size(), 0);  // 0 zero, 1 full, 2 partial
  auto emit = [&] {
    Cdp p;
    p.customer = c;
    p.full.assign(tau + 2, 0);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const Quantity ub = tb.ub[t][hs[i]];
      if (kind[i] == 1) {
        p.full[hs[i]] = ub;
        p.load += ub;
        p.cost += rho[i] * static_cast<double>(ub);
      } else if (kind[i] == 2) {
        p.partial_period = hs[i];
        p.rate = rho[i];
        p.max_partial = ub - 1;
      }
    }
    if (p.load > inst.second_fleet().capacity) return;
    if (prune && p.part() && p.rate >= 0) return;
    out.push_back(std::move(p));
  };
  auto rec = [&](auto&& self, std::size_t i, bool has_partial) -> void {
    if (i == hs.size()) {
      emit();
      return;
    }
    for (int k = 0; k < 3; ++k) {
      if (k == 2 && (has_partial || tb.ub[t][hs[i]] < 2)) continue;
      kind[i] = k;
      self(self, i + 1, has_partial || k == 2);
    }
    kind[i] = 0;
  };
  rec(rec, 0, false);
  if (!prune) return out;
  std::vector<Cdp> kept;
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < out.size() && !dominated; ++j) {
      if (i == j || !cdp_dominates(out[j], out[i])) continue;
      // mutual dominance keeps the earlier pattern
      dominated = !cdp_dominates(out[i], out[j]) || j < i;
    }
    if (!dominated) kept.push_back(out[i]);
  }
  return kept;
}

PricingGraph build_graph(const Instance& inst, int s, int t, const DualPrices& duals,
                         const std::vector<BranchDecision>& decisions, const PricingOptions& opts) {
  const int nn = inst.num_customers();
  if (nn > 63) throw InputError("pricing supports at most 63 customers");
  PricingGraph g;
  g.satellite = s;
  g.period = t;
  std::vector<bool> allowed(nn, true);
  std::vector<double> enter(nn, 0.0);  // branching duals on arcs entering a customer
  double source = duals.fleet[t];
  std::vector<std::pair<std::pair<int, int>, double>> edge_duals;
  std::set<std::pair<int, int>> banned_edges;
  for (std::size_t k = 0; k < decisions.size(); ++k) {
    const auto& d = decisions[k];
    const double beta = k < duals.branching.size() ? duals.branching[k] : 0.0;
    const bool in_period = d.period == 0 || d.period == t;
    const bool forbid = d.sense != lp::Sense::kGreaterEqual && d.rhs < 0.5;
    switch (d.type) {
      case DecisionType::kSecondTotal:
      case DecisionType::kSecondPeriod:
        if (!in_period) break;
        if (forbid) g.disabled = true;
        source += beta;
        break;
      case DecisionType::kCustomerFlow:
      case DecisionType::kCustomerPeriod:
      case DecisionType::kCustomerSatellite:
        if (!in_period || (d.type == DecisionType::kCustomerSatellite && d.satellite != s)) break;
        if (forbid) allowed[d.customer] = false;
        enter[d.customer] += beta;
        break;
      case DecisionType::kEdge:
        if (!in_period) break;
        if (forbid) banned_edges.insert({d.vertex_a, d.vertex_b});
        edge_duals.push_back({{d.vertex_a, d.vertex_b}, beta});
        break;
      default: break;
    }
  }
  if (g.disabled) return g;
  for (int c = 0; c < nn; ++c)
    if (allowed[c]) g.customers.push_back(c);
  const int n = g.size();
  const int sv = inst.satellite_vertex(s);
  auto vertex = [&](int node) { return node == 0 ? sv : inst.customer_vertex(g.customers[node - 1]); };
  g.arc.assign(n, std::vector<double>(n, PricingGraph::kNoArc));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int a = std::min(vertex(i), vertex(j)), b = std::max(vertex(i), vertex(j));
      if (banned_edges.count({a, b})) continue;
      double cost = inst.cost(vertex(i), vertex(j));
      cost -= i == 0 ? source : duals.visit[g.customers[i - 1]][t];
      if (j > 0) cost -= enter[g.customers[j - 1]];
      for (const auto& [e, beta] : edge_duals)
        if (e.first == a && e.second == b) cost -= beta;
      g.arc[i][j] = cost;
    }
  // ng neighbourhoods: kappa nearest customers, self included
  g.ng.assign(n, 0);
  for (int i = 1; i < n; ++i) {
    std::vector<int> order(n - 1);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (a == i || b == i) return a == i && b != i;
      return inst.cost(vertex(i), vertex(a)) < inst.cost(vertex(i), vertex(b));
    });
    const int k = std::min<int>(std::max(opts.ng_size, 1), n - 1);
    for (int m = 0; m < k; ++m) g.ng[i] |= std::uint64_t{1} << order[m];
  }
  g.cdps.assign(n, {});
  for (int i = 1; i < n; ++i) g.cdps[i] = enumerate_cdps(inst, s, t, g.customers[i - 1], duals);
  return g;
}

std::optional<Label> extend(const Label& from, int j, const Cdp& cdp, double arc, std::uint64_t ng_j,
                            Quantity q2) {
  const std::uint64_t bit = std::uint64_t{1} << j;
  if (from.memory & bit) return std::nullopt;
  if (from.part && cdp.part()) return std::nullopt;
  if (from.load + cdp.load > q2) return std::nullopt;
  Label l;
  l.cost = from.cost + arc + cdp.cost;
  l.load = from.load + cdp.load;
  l.memory = (from.memory & ng_j) | bit;
  l.node = j;
  if (cdp.part()) {
    l.part = true;
    l.rate = cdp.rate;
    l.max_partial = cdp.max_partial;
  } else {
    l.part = from.part;
    l.rate = from.rate;
    l.max_partial = from.max_partial;
  }
  if (l.part) l.max_partial = std::min(l.max_partial, q2 - l.load);
  return l;
}

bool dominates(const Label& a, const Label& b) {
  if (a.load > b.load) return false;
  if (a.memory & ~b.memory) return false;
  if (a.part && !b.part) return false;
  const double ra = a.part ? a.rate : 0.0, rb = b.part ? b.rate : 0.0;
  const double ma = a.part ? static_cast<double>(a.max_partial) : 0.0;
  const double mb = b.part ? static_cast<double>(b.max_partial) : 0.0;
  if (a.cost + ma * ra > b.cost + mb * rb) return false;
  if (a.cost > b.cost) return false;
  return a.cost + mb * ra <= b.cost + mb * rb;
}

namespace {

class Labeler {
 public:
  Labeler(const Instance& inst, const PricingGraph& g, const PricingOptions& opts)
      : inst_(inst), g_(g), opts_(opts), q2_(inst.second_fleet().capacity) {}

  PricingResult run() {
    PricingResult res;
    if (g_.disabled || g_.size() < 2) return res;
    const bool bidir = opts_.bidirectional && opts_.half_point < 1.0;
    const double fwd_limit = bidir ? opts_.half_point * static_cast<double>(q2_) : static_cast<double>(q2_);
    const double bwd_limit = (1.0 - opts_.half_point) * static_cast<double>(q2_);
    propagate(fwd_, true, fwd_limit);
    if (bidir && !aborted_) propagate(bwd_, false, bwd_limit);
    res.labels = created_;
    res.dominated = dominated_;
    res.aborted = aborted_;

    const int n = g_.size();
    for (int i = 1; i < n; ++i)
      for (int f : fwd_.bucket[i]) {
        const Label& F = fwd_.labels[f];
        if (g_.arc[i][0] != PricingGraph::kNoArc) consider(F.cost + g_.arc[i][0], F.load, F, nullptr, f, -1);
        if (!bidir || aborted_ || static_cast<double>(F.load) <= fwd_limit) continue;
        for (int j = 1; j < n; ++j) {
          if (j == i || g_.arc[i][j] == PricingGraph::kNoArc) continue;
          for (int b : bwd_.bucket[j]) {
            const Label& B = bwd_.labels[b];
            if (F.memory & B.memory) continue;
            if (F.part && B.part) continue;
            if (F.load + B.load > q2_) continue;
            consider(F.cost + g_.arc[i][j] + B.cost, F.load + B.load, F, &B, f, b);
          }
        }
      }
    res.best = best_;
    emit(res);
    return res;
  }

 private:
  struct Side {
    std::vector<Label> labels;
    std::vector<bool> dead;
    std::vector<std::vector<int>> bucket;  // alive labels per node
  };
  struct Candidate {
    double value;
    int fwd;
    int bwd;
    Quantity partial;
  };

  void propagate(Side& side, bool forward, double limit) {
    const int n = g_.size();
    side.bucket.assign(n, {});
    side.labels.push_back(Label{});
    side.dead.push_back(false);
    std::deque<int> queue{0};
    while (!queue.empty()) {
      const int li = queue.front();
      queue.pop_front();
      if (side.dead[li]) continue;
      const Label cur = side.labels[li];
      if (li != 0 && static_cast<double>(cur.load) > limit) continue;
      for (int j = 1; j < n; ++j) {
        const double arc = forward ? g_.arc[cur.node][j] : g_.arc[j][cur.node];
        if (j == cur.node || arc == PricingGraph::kNoArc) continue;
        const auto& patterns = g_.cdps[j];
        for (std::size_t k = 0; k < patterns.size(); ++k) {
          auto next = extend(cur, j, patterns[k], arc, g_.ng[j], q2_);
          if (!next) continue;
          next->pred = li;
          next->cdp = static_cast<int>(k);
          if (++created_ > opts_.label_cap) {
            aborted_ = true;
            return;
          }
          if (insert(side, *next)) queue.push_back(static_cast<int>(side.labels.size()) - 1);
        }
      }
    }
  }

  bool insert(Side& side, const Label& l) {
    auto& bucket = side.bucket[l.node];
    if (opts_.dominance) {
      for (int o : bucket)
        if (dominates(side.labels[o], l)) {
          ++dominated_;
          return false;
        }
      std::erase_if(bucket, [&](int o) {
        if (!dominates(l, side.labels[o])) return false;
        side.dead[o] = true;
        ++dominated_;
        return true;
      });
    }
    side.labels.push_back(l);
    side.dead.push_back(false);
    bucket.push_back(static_cast<int>(side.labels.size()) - 1);
    return true;
  }

  void consider(double cost, Quantity load, const Label& F, const Label* B, int f, int b) {
    const Label* p = F.part ? &F : (B && B->part ? B : nullptr);
    Quantity amount = 0;
    if (p) amount = std::max<Quantity>(0, std::min(p->max_partial, q2_ - load));
    const double value = cost + (p ? p->rate * static_cast<double>(amount) : 0.0);
    best_ = std::min(best_, value);
    if (value >= -opts_.tolerance) return;
    cands_.push_back({value, f, b, amount});
    if (cands_.size() > 4096) trim(1024);
  }

  void trim(std::size_t keep) {
    auto cmp = [](const Candidate& a, const Candidate& b) {
      return a.value < b.value || (a.value == b.value && (a.fwd < b.fwd || (a.fwd == b.fwd && a.bwd < b.bwd)));
    };
    if (cands_.size() > keep) {
      std::nth_element(cands_.begin(), cands_.begin() + static_cast<long>(keep), cands_.end(), cmp);
      cands_.resize(keep);
    }
    std::sort(cands_.begin(), cands_.end(), cmp);
  }

  void emit(PricingResult& res) {
    trim(std::max<std::size_t>(static_cast<std::size_t>(opts_.max_columns) * 8, 64));
    std::set<std::string> seen;
    const int tau = inst_.horizon();
    for (const auto& c : cands_) {
      if (static_cast<int>(res.columns.size()) >= opts_.max_columns) break;
      std::vector<std::pair<int, int>> visits;  // (node, cdp) in route order
      for (int li = c.fwd; li > 0; li = fwd_.labels[li].pred)
        visits.emplace_back(fwd_.labels[li].node, fwd_.labels[li].cdp);
      std::reverse(visits.begin(), visits.end());
      for (int li = c.bwd; li > 0; li = bwd_.labels[li].pred)
        visits.emplace_back(bwd_.labels[li].node, bwd_.labels[li].cdp);
      std::vector<int> seq;
      std::vector<CustomerDelivery> dels;
      for (auto [node, k] : visits) {
        const Cdp& p = g_.cdps[node][k];
        seq.push_back(p.customer);
        CustomerDelivery d{p.customer, p.full};
        if (p.part()) d.q[p.partial_period] = c.partial;
        d.q.resize(tau + 2, 0);
        dels.push_back(std::move(d));
      }
      Column col = make_column(inst_, g_.satellite, g_.period, std::move(seq), std::move(dels));
      if (!seen.insert(column_key(col)).second) continue;
      res.columns.push_back(std::move(col));
    }
  }

  const Instance& inst_;
  const PricingGraph& g_;
  const PricingOptions& opts_;
  Quantity q2_;
  Side fwd_, bwd_;
  long created_ = 0;
  long dominated_ = 0;
  bool aborted_ = false;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<Candidate> cands_;
};

}  // namespace

PricingResult solve_pricing(const Instance& inst, const PricingGraph& graph, const PricingOptions& opts) {
  return Labeler(inst, graph, opts).run();
}

}  // namespace teirp
