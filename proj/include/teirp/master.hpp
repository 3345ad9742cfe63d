#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teirp/first_echelon.hpp"
#include "teirp/instance.hpp"
#include "teirp/lp.hpp"

namespace teirp {

/// Second-echelon route with a delivery pattern, delivered in one period.
/// Non-elementary (ng) routes are allowed: per-customer visits are counted and
/// the deliveries of repeated visits are aggregated.
struct Column {
  int satellite = 0;
  int period = 0;
  std::vector<int> sequence;                 // local customer indices in visit order
  std::vector<CustomerDelivery> deliveries;  // one per distinct customer, ascending
  double cost = 0.0;

  Quantity load() const;
  int visits(int c) const;
  bool elementary() const;
  const CustomerDelivery* delivery(int c) const;
  /// Times the closed tour traverses the undirected edge {a, b} (instance vertices).
  int edge_traversals(const Instance& inst, int a, int b) const;
  /// Extreme pattern check: at most one sub-delivery strictly inside (0, UB).
  bool extreme(const Instance& inst) const;
};

/// Builds a column: merges per-visit deliveries, reverses the sequence into
/// canonical direction (first customer <= last) and computes the cost.
Column make_column(const Instance& inst, int s, int t, std::vector<int> sequence,
                   std::vector<CustomerDelivery> per_visit);

/// Identity of a column up to route reversal.
std::string column_key(const Column& col);
/// Identity of the route (s, t, canonical sequence) only.
std::string route_key(const Column& col);

enum class DecisionType {
  kFirstTotal = 1,    // sum of all lambda
  kFirstPeriod,       // sum of lambda in a period
  kSatelliteFlow,     // lambda of routes through a satellite, all periods
  kFirstRoute,        // one lambda
  kSecondTotal,       // sum of all alpha
  kSecondPeriod,      // sum of alpha in a period
  kCustomerFlow,      // visits of a customer, all periods
  kCustomerPeriod,    // visits of a customer in a period
  kCustomerSatellite, // visits of a customer in a period from a satellite
  kEdge,              // traversals of a second-echelon edge in a period
};

struct BranchDecision {
  DecisionType type = DecisionType::kFirstTotal;
  int period = 0;      // 0 when the family is not per period
  int satellite = -1;  // local satellite
  int customer = -1;   // local customer
  int route = -1;      // first-echelon route index
  int vertex_a = -1;   // edge endpoints (instance vertices), a < b
  int vertex_b = -1;
  lp::Sense sense = lp::Sense::kLessEqual;
  double rhs = 0.0;

  std::string describe() const;
};

double decision_coefficient(const Instance& inst, const BranchDecision& d, const Column& col);
double decision_lambda_coefficient(const BranchDecision& d, const FirstEchelonRoute& route,
                                   int route_index, int period);
/// True when the decision is a "<= 0" bound that no column touching it may violate.
bool decision_forbids(const Instance& inst, const BranchDecision& d, const Column& col);

/// Dual values, indexed like the master rows. Missing rows read as 0.
struct DualPrices {
  std::vector<std::vector<double>> outflow;   // [s][t], satellite outflow link
  std::vector<std::vector<double>> demand;    // [c][h], h = 0..tau+1
  std::vector<std::vector<double>> capacity;  // [c][h], h = 0..tau
  std::vector<std::vector<double>> visit;     // [c][t]
  std::vector<double> fleet;                  // [t], second-echelon fleet
  std::vector<double> branching;              // per active decision
};

/// f - y A for a column, assembled from the dual families.
double reduced_cost(const Instance& inst, const Column& col, const DualPrices& duals,
                    const std::vector<BranchDecision>& decisions);

/// Round trips covering each period's residual demand; the satellite switches
/// when its capacity or the first-echelon capacity would be exceeded.
std::vector<Column> initial_columns(const Instance& inst);

struct MasterOptions {
  double artificial_cost = 1e7;
};

/// Basis of a master LP in layout-independent form.
struct SavedBasis {
  std::vector<lp::Basis::State> fixed;      // lambda, psi, base artificials
  std::vector<lp::Basis::State> pool;       // by pool index
  std::vector<lp::Basis::State> base_rows;
  std::vector<lp::Basis::State> decision_rows;
  std::vector<lp::Basis::State> decision_artificials;
};

struct IntegerSolution {
  double objective = 0.0;
  long nodes = 0;
  bool proven_optimal = false;
  std::vector<std::vector<double>> lambda;        // [p][t]
  std::vector<std::pair<int, double>> columns;    // (pool index, alpha) with alpha > 0
  std::vector<std::vector<std::vector<double>>> psi;  // [s][l][h], 0 where absent
};

/// Restricted master problem: first-echelon lambda and satellite transfer psi
/// variables are fixed; second-echelon columns come from a global pool.
class Master {
 public:
  Master(const Instance& inst, std::vector<FirstEchelonRoute> routes, MasterOptions opts = {});

  const Instance& instance() const { return *inst_; }
  const std::vector<FirstEchelonRoute>& routes() const { return routes_; }
  const std::vector<Column>& pool() const { return pool_; }

  /// Adds a column to the pool and the LP; returns its pool index or -1 for a duplicate.
  int add_column(Column col);

  /// Rebuilds the LP for a branch node.
  void set_decisions(std::vector<BranchDecision> decisions, const SavedBasis* warm = nullptr);
  const std::vector<BranchDecision>& decisions() const { return decisions_; }

  lp::Status solve();
  const lp::Solution& solution() const { return sol_; }
  double objective() const { return sol_.objective; }
  DualPrices duals() const;
  /// Total value of the artificial variables in the last solution.
  double artificial_total() const;
  double lambda(int p, int t) const;
  double alpha(int k) const;
  int pool_lp_column(int k) const { return pool_cols_.at(k); }
  /// psi for entry period l and exit period h, 0 when the variable does not exist.
  double psi(int s, int l, int h) const;
  SavedBasis save_basis() const;

  const lp::LinearProgram& lp() const { return lp_; }
  int base_row_count() const { return base_rows_; }
  /// Closed-form row count of the base formulation.
  static int expected_rows(const Instance& inst, int routes);

  /// Integer program over the whole pool, no branching rows, artificials off.
  std::optional<IntegerSolution> solve_integer(double seconds, long node_limit = 1000000) const;

 private:
  // Rebuilds lp_ and every index table. `route_row` (integer mode) maps each
  // pool column to an aggregate row, -1 for none.
  void build(const std::vector<BranchDecision>& decisions, const std::vector<int>* route_row);
  std::vector<lp::Entry> column_entries(const Column& col) const;
  bool forbidden(const Column& col) const;

  const Instance* inst_;
  std::vector<FirstEchelonRoute> routes_;
  MasterOptions opts_;
  int tau_ = 0;

  // row indices, -1 when absent
  std::vector<std::vector<int>> row_outflow_, row_cover_, row_sat_cap_, row_cus_cap_, row_first_cap_,
      row_sat_visit_, row_cus_visit_, row_in_, row_at_least_;
  std::vector<int> row_fleet1_, row_fleet2_, row_init_;
  int base_rows_ = 0;

  // column indices
  std::vector<std::vector<int>> col_lambda_;          // [p][t]
  std::vector<std::vector<std::vector<int>>> col_psi_;  // [s][l][h]
  std::vector<int> fixed_cols_;                       // lambda, psi, base artificials in order
  std::vector<int> base_artificials_;
  std::vector<int> pool_cols_;
  std::vector<int> decision_rows_, decision_artificials_;  // -1 artificial when none

  std::vector<Column> pool_;
  std::map<std::string, int> keys_;
  std::vector<BranchDecision> decisions_;
  lp::LinearProgram lp_;
  lp::Basis basis_;
  lp::Solution sol_;
};

}  // namespace teirp
