#include "teirp/colgen.hpp"

#include <atomic>
#include <thread>

#include <fmt/format.h>

#include "teirp/log.hpp"

namespace teirp {

const char* to_string(ColgenStatus s) {
  switch (s) {
    case ColgenStatus::kConverged: return "converged";
    case ColgenStatus::kInfeasible: return "infeasible";
    case ColgenStatus::kIterationLimit: return "iteration_limit";
    case ColgenStatus::kTimeout: return "timeout";
    case ColgenStatus::kLpFailure: return "lp_failure";
  }
  return "?";
}

namespace {

enum class Mode { kExact, kHeuristic };

struct Outcome {
  std::vector<Column> columns;
  bool aborted = false;
  bool labeler_1_failed = false;
};

template <class Fn>
void parallel_for(int n, int threads, Fn fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int k = 0; k < std::min(threads, n); ++k)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

class Loop {
 public:
  Loop(Master& m, const ColgenOptions& opts, PricingMemory* memory)
      : m_(m), inst_(m.instance()), opts_(opts), memory_(memory) {
    ns_ = inst_.num_satellites();
    tau_ = inst_.horizon();
    if (!memory_) memory_ = &local_;
    if (memory_->use_labeler_1.empty())
      memory_->use_labeler_1.assign(ns_, std::vector<bool>(tau_ + 1, true));
    exact_on_.assign(count(), true);
  }

  ColgenStats run() {
    if (!solve()) return stats_;
    if (opts_.heuristics) {
      // heuristic rounds until none of them returns a column
      while (true) {
        if (stop()) return stats_;
        if (round(Mode::kHeuristic) == 0) break;
        if (!solve()) return stats_;
      }
    }
    while (true) {
      if (stop()) return stats_;
      const bool all_on = std::all_of(exact_on_.begin(), exact_on_.end(), [](bool b) { return b; });
      const int added = round(Mode::kExact);
      if (added == 0 && stale_ > 0 && !refreshed_) {
        // pricing found negative columns the warm-started LP did not price in
        logger()->debug("{} pool columns priced negative, cold re-solve", stale_);
        refreshed_ = true;
        const auto decisions = m_.decisions();
        m_.set_decisions(decisions, nullptr);
        if (!solve()) return stats_;
        exact_on_.assign(count(), true);
        continue;
      }
      if (added > 0) refreshed_ = false;
      if (added == 0) {
        if (stale_ > 0) logger()->warn("{} pool columns still price negative after a cold re-solve", stale_);
        if (all_on) break;
        exact_on_.assign(count(), true);  // confirmation round over every subproblem
        continue;
      }
      if (!solve()) return stats_;
      if (opts_.heuristics) {
        if (stop()) return stats_;
        if (round(Mode::kHeuristic) > 0 && !solve()) return stats_;
      }
    }
    stats_.status = m_.artificial_total() > tol::kFeasibility ? ColgenStatus::kInfeasible
                                                              : ColgenStatus::kConverged;
    return stats_;
  }

 private:
  int count() const { return ns_ * tau_; }

  bool solve() {
    if (m_.solve() != lp::Status::kOptimal) {
      stats_.status = ColgenStatus::kLpFailure;
      logger()->error("restricted master not optimal");
      return false;
    }
    stats_.objective = m_.objective();
    return true;
  }

  bool stop() {
    if (stats_.iterations >= opts_.max_iterations) {
      stats_.status = ColgenStatus::kIterationLimit;
      logger()->error("column generation stopped after {} iterations, objective {}", stats_.iterations,
                      stats_.objective);
      return true;
    }
    if (opts_.deadline && std::chrono::steady_clock::now() >= *opts_.deadline) {
      stats_.status = ColgenStatus::kTimeout;
      return true;
    }
    return false;
  }

  Outcome price(int k, Mode mode, const DualPrices& duals) {
    const int s = k / tau_, t = k % tau_ + 1;
    Outcome out;
    const auto g = build_graph(inst_, s, t, duals, m_.decisions(), opts_.pricing);
    if (g.disabled) return out;
    if (mode == Mode::kExact) {
      auto r = solve_pricing(inst_, g, opts_.pricing);
      out.columns = std::move(r.columns);
      out.aborted = r.aborted;
      return out;
    }
    TabuOptions tabu = opts_.tabu;
    tabu.seed = opts_.tabu.seed * 1000003u + static_cast<std::uint64_t>(k);
    out.columns = tabu_pricer(inst_, g, duals, opts_.pricing, tabu);
    if (!out.columns.empty()) return out;
    if (memory_->use_labeler_1[s][t]) {
      auto r = heuristic_labeler_1(inst_, g, opts_.pricing);
      out.columns = std::move(r.columns);
      out.labeler_1_failed = out.columns.empty();
      if (!out.labeler_1_failed) return out;
    }
    out.columns = heuristic_labeler_2(inst_, g, duals, opts_.pricing);
    return out;
  }

  // One pricing pass; returns the number of columns added to the master.
  int round(Mode mode) {
    const DualPrices duals = m_.duals();
    std::vector<int> jobs;
    for (int k = 0; k < count(); ++k)
      if (mode == Mode::kHeuristic || exact_on_[k]) jobs.push_back(k);
    std::vector<Outcome> results(jobs.size());
    stale_ = 0;
    parallel_for(static_cast<int>(jobs.size()), opts_.threads,
                 [&](int i) { results[i] = price(jobs[i], mode, duals); });
    int added = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const int k = jobs[i];
      auto& r = results[i];
      if (r.labeler_1_failed) memory_->use_labeler_1[k / tau_][k % tau_ + 1] = false;
      if (r.aborted) ++stats_.aborted_subproblems;
      int here = 0, dup = 0;
      for (auto& col : r.columns) {
        if (reduced_cost(inst_, col, duals, m_.decisions()) >= -opts_.tolerance) continue;
        if (m_.add_column(std::move(col)) >= 0) ++here;
        else ++dup;
      }
      stale_ += dup;
      if (mode == Mode::kExact && here == 0 && dup == 0 && !r.aborted) exact_on_[k] = false;
      added += here;
    }
    ++stats_.iterations;
    (mode == Mode::kExact ? stats_.exact_rounds : stats_.heuristic_rounds)++;
    stats_.columns_added += added;
    auto line = fmt::format("{}, {:.6f}, {}, {}, {}", stats_.iterations, stats_.objective, m_.pool().size(),
                            added, mode == Mode::kExact ? "exact" : "heuristic");
    logger()->debug("{}", line);
    stats_.trace.push_back(std::move(line));
    return added;
  }

  Master& m_;
  const Instance& inst_;
  const ColgenOptions& opts_;
  PricingMemory* memory_;
  PricingMemory local_;
  int ns_ = 0;
  int tau_ = 0;
  std::vector<bool> exact_on_;
  int stale_ = 0;           // negative columns already in the pool, last round
  bool refreshed_ = false;  // cold re-solve done since the last added column
  ColgenStats stats_;
};

}  // namespace

ColgenStats run_column_generation(Master& master, const ColgenOptions& opts, PricingMemory* memory) {
  return Loop(master, opts, memory).run();
}

}  // namespace teirp
