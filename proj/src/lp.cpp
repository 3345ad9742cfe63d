#include "teirp/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "teirp/common.hpp"

namespace teirp::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration_limit";
  }
  return "?";
}

int LinearProgram::add_row(Sense sense, double rhs, std::string name) {
  rows_.push_back(Row{sense, rhs, std::move(name)});
  return num_rows() - 1;
}

int LinearProgram::add_column(double cost, double lower, double upper, std::vector<Entry> entries,
                              std::string name) {
  if (lower > upper) throw ContractViolation("column lower bound exceeds upper bound");
  if (std::isinf(lower) && lower > 0) throw ContractViolation("lower bound +inf");
  for (const auto& e : entries)
    if (e.index < 0 || e.index >= num_rows())
      throw ContractViolation(fmt::format("column references unknown row {}", e.index));
  std::erase_if(entries, [](const Entry& e) { return e.value == 0.0; });
  cols_.push_back(Col{cost, lower, upper, std::move(entries), std::move(name)});
  return num_columns() - 1;
}

void LinearProgram::set_bounds(int col, double lower, double upper) {
  if (lower > upper) throw ContractViolation("column lower bound exceeds upper bound");
  cols_.at(col).lower = lower;
  cols_.at(col).upper = upper;
}

void LinearProgram::set_cost(int col, double cost) { cols_.at(col).cost = cost; }
void LinearProgram::set_rhs(int row, double rhs) { rows_.at(row).rhs = rhs; }

std::vector<double> LinearProgram::activities(std::span<const double> x) const {
  std::vector<double> act(num_rows(), 0.0);
  for (int j = 0; j < num_columns(); ++j)
    for (const auto& e : cols_[j].entries) act[e.index] += e.value * x[j];
  return act;
}

void LinearProgram::dump(std::ostream& out) const {
  for (int i = 0; i < num_rows(); ++i) {
    const char s = rows_[i].sense == Sense::kLessEqual ? 'L'
                   : rows_[i].sense == Sense::kEqual   ? 'E'
                                                       : 'G';
    out << fmt::format("ROW {} {} {} {}\n", i, rows_[i].name.empty() ? "-" : rows_[i].name, s,
                       rows_[i].rhs);
  }
  for (int j = 0; j < num_columns(); ++j) {
    const auto& c = cols_[j];
    out << fmt::format("COL {} {} {} {} {}", j, c.name.empty() ? "-" : c.name, c.cost, c.lower,
                       c.upper);
    for (const auto& e : c.entries) out << fmt::format(" {}:{}", e.index, e.value);
    out << '\n';
  }
}

namespace {

using State = Basis::State;

// Working copy of the LP in computational form A x - r = 0, where r holds one
// logical per row bounded by the row sense, plus phase-one artificials.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opts) : lp_(lp), opts_(opts) {
    m_ = lp.num_rows();
    n_ = lp.num_columns();
    const int total = n_ + m_;
    lo_.resize(total);
    up_.resize(total);
    cols_.resize(total);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.lower(j);
      up_[j] = lp.upper(j);
      cols_[j] = lp.column(j);
    }
    for (int i = 0; i < m_; ++i) {
      const int j = n_ + i;
      cols_[j] = {Entry{i, -1.0}};
      switch (lp.sense(i)) {
        case Sense::kLessEqual: lo_[j] = -kInf; up_[j] = lp.rhs(i); break;
        case Sense::kGreaterEqual: lo_[j] = lp.rhs(i); up_[j] = kInf; break;
        case Sense::kEqual: lo_[j] = up_[j] = lp.rhs(i); break;
      }
    }
    x_.assign(total, 0.0);
    state_.assign(total, State::kLower);
    pos_.assign(total, -1);
  }

  Solution run(const Basis* warm) {
    Solution sol;
    bool ready = warm != nullptr && !warm->empty() && try_warm(*warm);
    if (!ready) {
      cold_start();
      cost_.assign(total(), 0.0);
      for (int j = first_artificial_; j < total(); ++j) cost_[j] = 1.0;
      Status st = iterate();
      if (st == Status::kIterationLimit) {
        sol.status = st;
        sol.iterations = iterations_;
        return sol;
      }
      double infeas = 0.0;
      for (int j = first_artificial_; j < total(); ++j) infeas += x_[j];
      if (infeas > kPrimalTol * std::max(1.0, static_cast<double>(m_))) {
        sol.status = Status::kInfeasible;
        sol.iterations = iterations_;
        return sol;
      }
      for (int j = first_artificial_; j < total(); ++j) {
        up_[j] = 0.0;
        if (state_[j] != State::kBasic) x_[j] = 0.0;
      }
      drive_out_artificials();
    }
    cost_.assign(total(), 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = lp_.cost(j);
    Status st = iterate();
    sol.status = st;
    sol.iterations = iterations_;
    if (st != Status::kOptimal) return sol;
    finish(sol);
    return sol;
  }

 private:
  int total() const { return static_cast<int>(lo_.size()); }

  void set_nonbasic_at_bound(int j) {
    if (std::isfinite(lo_[j])) {
      state_[j] = State::kLower;
      x_[j] = lo_[j];
    } else if (std::isfinite(up_[j])) {
      state_[j] = State::kUpper;
      x_[j] = up_[j];
    } else {
      state_[j] = State::kZero;
      x_[j] = 0.0;
    }
  }

  void cold_start() {
    lo_.resize(n_ + m_);
    up_.resize(n_ + m_);
    cols_.resize(n_ + m_);
    x_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, State::kLower);
    first_artificial_ = n_ + m_;
    for (int j = 0; j < n_; ++j) set_nonbasic_at_bound(j);
    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < n_; ++j)
      if (x_[j] != 0.0)
        for (const auto& e : cols_[j]) act[e.index] += e.value * x_[j];
    head_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      const int r = n_ + i;
      if (act[i] >= lo_[r] - kPrimalTol && act[i] <= up_[r] + kPrimalTol) {
        state_[r] = State::kBasic;
        x_[r] = act[i];
        head_[i] = r;
        continue;
      }
      const double bound = act[i] < lo_[r] ? lo_[r] : up_[r];
      state_[r] = bound == lo_[r] ? State::kLower : State::kUpper;
      x_[r] = bound;
      // A x - r + sigma * a = 0  =>  sigma * a = bound - act
      const double diff = bound - act[i];
      const double sigma = diff > 0 ? 1.0 : -1.0;
      lo_.push_back(0.0);
      up_.push_back(kInf);
      cols_.push_back({Entry{i, sigma}});
      x_.push_back(std::abs(diff));
      state_.push_back(State::kBasic);
      head_[i] = total() - 1;
    }
    pos_.assign(total(), -1);
    for (int i = 0; i < m_; ++i) pos_[head_[i]] = i;
    // basis matrix is diagonal (+-1)
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = 1.0 / cols_[head_[i]][0].value;
    since_refactor_ = 0;
  }

  bool try_warm(const Basis& warm) {
    first_artificial_ = n_ + m_;
    head_.clear();
    for (int j = 0; j < n_; ++j) {
      State s = j < static_cast<int>(warm.columns.size()) ? warm.columns[j] : State::kLower;
      apply_state(j, s);
    }
    for (int i = 0; i < m_; ++i) {
      State s = i < static_cast<int>(warm.rows.size()) ? warm.rows[i] : State::kBasic;
      apply_state(n_ + i, s);
    }
    if (static_cast<int>(head_.size()) != m_) return false;
    pos_.assign(total(), -1);
    for (int i = 0; i < m_; ++i) pos_[head_[i]] = i;
    if (!refactor()) return false;
    compute_basic_values();
    for (int i = 0; i < m_; ++i) {
      const int b = head_[i];
      if (x_[b] < lo_[b] - kPrimalTol || x_[b] > up_[b] + kPrimalTol) return false;
    }
    return true;
  }

  void apply_state(int j, State s) {
    switch (s) {
      case State::kBasic:
        state_[j] = State::kBasic;
        head_.push_back(j);
        break;
      case State::kUpper:
        if (std::isfinite(up_[j])) {
          state_[j] = State::kUpper;
          x_[j] = up_[j];
        } else {
          set_nonbasic_at_bound(j);
        }
        break;
      default:
        set_nonbasic_at_bound(j);
        break;
    }
  }

  std::size_t idx(int i, int k) const { return static_cast<std::size_t>(i) * m_ + k; }

  bool refactor() {
    std::vector<double> b(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i)
      for (const auto& e : cols_[head_[i]]) b[idx(e.index, i)] = e.value;
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[idx(i, i)] = 1.0;
    // Gauss-Jordan with partial pivoting, rows of b and binv swapped together.
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::abs(b[idx(col, col)]);
      for (int r = col + 1; r < m_; ++r)
        if (std::abs(b[idx(r, col)]) > best) {
          best = std::abs(b[idx(r, col)]);
          piv = r;
        }
      if (best < 1e-11) return false;
      if (piv != col)
        for (int k = 0; k < m_; ++k) {
          std::swap(b[idx(piv, k)], b[idx(col, k)]);
          std::swap(binv_[idx(piv, k)], binv_[idx(col, k)]);
        }
      const double inv = 1.0 / b[idx(col, col)];
      for (int k = 0; k < m_; ++k) {
        b[idx(col, k)] *= inv;
        binv_[idx(col, k)] *= inv;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = b[idx(r, col)];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          b[idx(r, k)] -= f * b[idx(col, k)];
          binv_[idx(r, k)] -= f * binv_[idx(col, k)];
        }
      }
    }
    since_refactor_ = 0;
    return true;
  }

  void compute_basic_values() {
    std::vector<double> rhs(m_, 0.0);
    for (int j = 0; j < total(); ++j)
      if (state_[j] != State::kBasic && x_[j] != 0.0)
        for (const auto& e : cols_[j]) rhs[e.index] -= e.value * x_[j];
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      for (int k = 0; k < m_; ++k) v += binv_[idx(i, k)] * rhs[k];
      x_[head_[i]] = v;
    }
  }

  void ftran(int j, std::vector<double>& alpha) const {
    alpha.assign(m_, 0.0);
    for (const auto& e : cols_[j]) {
      const int k = e.index;
      for (int i = 0; i < m_; ++i) alpha[i] += binv_[idx(i, k)] * e.value;
    }
  }

  void compute_duals(std::vector<double>& y) const {
    y.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[head_[i]];
      if (cb == 0.0) continue;
      for (int k = 0; k < m_; ++k) y[k] += cb * binv_[idx(i, k)];
    }
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = cost_[j];
    for (const auto& e : cols_[j]) d -= y[e.index] * e.value;
    return d;
  }

  void pivot(int r, int q, const std::vector<double>& alpha) {
    const double ar = alpha[r];
    for (int k = 0; k < m_; ++k) binv_[idx(r, k)] /= ar;
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      const double f = alpha[i];
      for (int k = 0; k < m_; ++k) binv_[idx(i, k)] -= f * binv_[idx(r, k)];
    }
    const int leaving = head_[r];
    pos_[leaving] = -1;
    head_[r] = q;
    pos_[q] = r;
    state_[q] = State::kBasic;
    ++since_refactor_;
  }

  Status iterate() {
    std::vector<double> y, alpha;
    int degenerate_run = 0;
    while (true) {
      if (iterations_ >= opts_.max_iterations) return Status::kIterationLimit;
      if (since_refactor_ >= opts_.refactor_interval) {
        if (refactor()) compute_basic_values();
      }
      compute_duals(y);
      const bool bland = degenerate_run >= opts_.bland_after_degenerate;
      int q = -1;
      double best = 0.0;
      int dir = 0;
      for (int j = 0; j < total(); ++j) {
        const State s = state_[j];
        if (s == State::kBasic) continue;
        if (lo_[j] == up_[j]) continue;
        // tolerance grows with the terms summed, so large duals (big-M
        // artificials basic at zero) do not turn rounding noise into pivots
        double scale = std::abs(cost_[j]);
        for (const auto& e : cols_[j]) scale += std::abs(y[e.index] * e.value);
        const double tol = kDualTol * std::max(1.0, kNoiseScale * scale);
        const double d = reduced_cost(j, y);
        int jd = 0;
        if ((s == State::kLower || s == State::kZero) && d < -tol) jd = +1;
        else if ((s == State::kUpper || s == State::kZero) && d > tol) jd = -1;
        if (jd == 0) continue;
        if (bland) {
          q = j;
          dir = jd;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dir = jd;
        }
      }
      if (q < 0) return Status::kOptimal;
      ftran(q, alpha);
      const double flip =
          (std::isfinite(lo_[q]) && std::isfinite(up_[q])) ? up_[q] - lo_[q] : kInf;
      // pass 1: smallest step that keeps every basic variable within bounds
      auto limit_of = [&](int i) {
        const double delta = -dir * alpha[i];
        if (std::abs(delta) <= kPivotTol) return kInf;
        const int b = head_[i];
        if (delta < 0)
          return std::isfinite(lo_[b]) ? std::max(0.0, (x_[b] - lo_[b]) / -delta) : kInf;
        return std::isfinite(up_[b]) ? std::max(0.0, (up_[b] - x_[b]) / delta) : kInf;
      };
      double theta = kInf;
      for (int i = 0; i < m_; ++i) theta = std::min(theta, limit_of(i));
      int leave = -1;
      if (flip <= theta) {
        theta = flip;
      } else if (std::isfinite(theta)) {
        // pass 2: among near-ties prefer the largest pivot (Bland: lowest variable)
        double leave_mag = 0.0;
        for (int i = 0; i < m_; ++i) {
          if (limit_of(i) > theta + 1e-12) continue;
          const double mag = std::abs(alpha[i]);
          if (leave < 0 || (bland ? head_[i] < head_[leave] : mag > leave_mag)) {
            leave = i;
            leave_mag = mag;
          }
        }
      }
      if (!std::isfinite(theta)) return Status::kUnbounded;
      ++iterations_;
      degenerate_run = theta < 1e-12 ? degenerate_run + 1 : 0;
      x_[q] += dir * theta;
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] == 0.0) continue;
        x_[head_[i]] -= dir * theta * alpha[i];
      }
      if (leave < 0) {
        // bound flip of the entering variable
        state_[q] = dir > 0 ? State::kUpper : State::kLower;
        x_[q] = dir > 0 ? up_[q] : lo_[q];
        continue;
      }
      const int b = head_[leave];
      const double delta = -dir * alpha[leave];
      if (delta < 0) {
        state_[b] = State::kLower;
        x_[b] = lo_[b];
      } else {
        state_[b] = State::kUpper;
        x_[b] = up_[b];
      }
      if (b >= first_artificial_) up_[b] = 0.0;
      pivot(leave, q, alpha);
    }
  }

  void drive_out_artificials() {
    std::vector<double> alpha;
    for (int r = 0; r < m_; ++r) {
      if (head_[r] < first_artificial_) continue;
      // row r of B^-1 A_j for candidate nonbasic j
      for (int j = 0; j < first_artificial_; ++j) {
        if (state_[j] == State::kBasic) continue;
        double v = 0.0;
        for (const auto& e : cols_[j]) v += binv_[idx(r, e.index)] * e.value;
        if (std::abs(v) < 1e-7) continue;
        ftran(j, alpha);
        const int a = head_[r];
        state_[a] = State::kLower;
        x_[a] = 0.0;
        pivot(r, j, alpha);
        break;
      }
    }
    if (refactor()) compute_basic_values();
  }

  void finish(Solution& sol) {
    if (since_refactor_ > 0 && refactor()) compute_basic_values();
    std::vector<double> y;
    compute_duals(y);
    sol.primal.assign(x_.begin(), x_.begin() + n_);
    sol.duals = y;
    sol.reduced_costs.resize(n_);
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) {
      sol.reduced_costs[j] = reduced_cost(j, y);
      sol.objective += lp_.cost(j) * x_[j];
    }
    bool clean = true;
    for (int j = first_artificial_; j < total(); ++j)
      if (state_[j] == State::kBasic) clean = false;
    if (clean) {
      sol.basis.columns.assign(state_.begin(), state_.begin() + n_);
      sol.basis.rows.assign(state_.begin() + n_, state_.begin() + n_ + m_);
    }
  }

  const LinearProgram& lp_;
  const SimplexOptions& opts_;
  int m_ = 0;
  int n_ = 0;
  int first_artificial_ = 0;
  std::vector<double> lo_, up_, cost_, x_;
  std::vector<std::vector<Entry>> cols_;
  std::vector<State> state_;
  std::vector<int> head_;
  std::vector<int> pos_;
  std::vector<double> binv_;
  int since_refactor_ = 0;
  long iterations_ = 0;
};

}  // namespace

Solution SimplexBackend::solve(const LinearProgram& lp, const Basis* warm) {
  Simplex simplex(lp, opts_);
  return simplex.run(warm);
}

Solution solve_lp(const LinearProgram& lp, const Basis* warm) {
  SimplexBackend backend;
  return backend.solve(lp, warm);
}

namespace {

struct MilpSearch {
  LinearProgram lp;
  std::vector<int> ints;
  std::chrono::steady_clock::time_point deadline;
  long node_limit = 0;
  long nodes = 0;
  bool aborted = false;
  std::optional<MilpResult> best;

  void dfs(const Basis* warm) {
    if (std::chrono::steady_clock::now() > deadline || nodes >= node_limit) {
      aborted = true;
      return;
    }
    ++nodes;
    Solution sol = solve_lp(lp, warm);
    if (sol.status != Status::kOptimal) {
      if (sol.status == Status::kIterationLimit) aborted = true;
      return;
    }
    if (best && sol.objective >= best->objective - 1e-9) return;
    int branch = -1;
    double most = kIntegralityTol;
    for (int j : ints) {
      const double v = sol.primal[j];
      const double frac = std::abs(v - std::round(v));
      if (frac > most) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      std::vector<double> vals = sol.primal;
      for (int j : ints) vals[j] = std::round(vals[j]);
      best = MilpResult{sol.objective, std::move(vals), false, 0};
      return;
    }
    const double v = sol.primal[branch];
    const double lo = lp.lower(branch);
    const double up = lp.upper(branch);
    const double down_up = std::floor(v);
    const double up_lo = std::ceil(v);
    const bool down_first = v - down_up <= 0.5;
    for (int side = 0; side < 2; ++side) {
      const bool down = (side == 0) == down_first;
      if (down) lp.set_bounds(branch, lo, down_up);
      else lp.set_bounds(branch, up_lo, up);
      dfs(&sol.basis);
      lp.set_bounds(branch, lo, up);
      if (aborted) return;
    }
  }
};

}  // namespace

std::optional<MilpResult> solve_milp(const LinearProgram& lp, std::span<const int> integer_columns,
                                     std::chrono::duration<double> time_limit, long node_limit) {
  for (int j : integer_columns)
    if (j < 0 || j >= lp.num_columns()) throw ContractViolation("integer column out of range");
  MilpSearch search;
  search.lp = lp;
  search.ints.assign(integer_columns.begin(), integer_columns.end());
  search.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(time_limit);
  search.node_limit = node_limit;
  search.dfs(nullptr);
  if (search.best) {
    search.best->proven_optimal = !search.aborted;
    search.best->nodes = search.nodes;
  }
  return search.best;
}

}  // namespace teirp::lp
