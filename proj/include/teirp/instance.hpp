#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "teirp/common.hpp"

namespace teirp {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double euclidean(Point a, Point b);

struct SupplierData {
  int id = 0;
  Point pos;
};

struct SatelliteData {
  int id = 0;
  Point pos;
  Quantity capacity = 0;
  Quantity initial_inventory = 0;
  double holding_cost = 0.0;
};

struct CustomerData {
  int id = 0;
  Point pos;
  Quantity capacity = 0;
  Quantity initial_inventory = 0;
  double holding_cost = 0.0;
  std::vector<Quantity> demand;  // demand[h - 1] for h = 1..tau
};

struct Fleet {
  int vehicles = 0;
  Quantity capacity = 0;
};

struct EdgeOverride {
  int from_id = 0;
  int to_id = 0;
  double cost = 0.0;
};

/// Inventory data of one customer: everything the FIFO-derived sets need.
struct InventoryProfile {
  Quantity initial = 0;
  Quantity capacity = 0;
  std::vector<Quantity> demand;  // demand[h - 1]

  int horizon() const { return static_cast<int>(demand.size()); }
};

// FIFO-derived quantities of a single customer. Periods are 1-based; tau + 1
// is the artificial end-inventory period.

/// I^{0,h} for h = 1..tau (returned vector index h - 1).
std::vector<Quantity> residual_inventory(const InventoryProfile& p);
/// Demand not covered by the initial inventory, index h - 1.
std::vector<Quantity> residual_demand(const InventoryProfile& p);
/// Periods h in {t..tau+1} that a delivery made in period t may serve.
std::vector<int> delivery_periods(const InventoryProfile& p, int t);
/// Upper bound on the sub-delivery made in t for period h; h must be in delivery_periods(p, t).
Quantity subdelivery_upper_bound(const InventoryProfile& p, int t, int h);

/// Per-customer tables of every FIFO-derived set, precomputed once.
struct CustomerTables {
  std::vector<Quantity> residual_inventory;  // index h = 0..tau, [0] = I^0
  std::vector<Quantity> residual_demand;     // index h = 1..tau, [0] unused
  // delivery_periods[t] for t = 1..tau ([0] unused), ascending.
  std::vector<std::vector<int>> delivery_periods;
  // ub[t][h] for h = 0..tau+1; -1 when h is not a delivery period of t.
  std::vector<std::vector<Quantity>> ub;
  // T^-_h, Gamma^-_h for h = 1..tau+1 (T^- defined for h <= tau only).
  std::vector<std::vector<int>> t_minus;
  std::vector<std::vector<int>> gamma_minus;
  // Gamma^+_t for t = 1..tau.
  std::vector<std::vector<int>> gamma_plus;

  bool can_deliver(int t, int h) const { return ub[t][h] >= 0; }
};

CustomerTables build_customer_tables(const InventoryProfile& p);

/// The (T^-, Gamma^-, Gamma^+) triple for one customer, 1-based period sets.
struct GammaSets {
  std::vector<std::vector<int>> t_minus;      // [h], h = 1..tau
  std::vector<std::vector<int>> gamma_minus;  // [h], h = 1..tau+1
  std::vector<std::vector<int>> gamma_plus;   // [t], t = 1..tau
};
GammaSets gamma_sets(const InventoryProfile& p);

/// Splits per-period delivered totals (index t - 1) into FIFO sub-deliveries:
/// result[t][h] = quantity delivered in t consumed in h (h = tau + 1 is end
/// inventory). Throws ContractViolation when demand cannot be covered.
std::vector<std::vector<double>> fifo_split(const InventoryProfile& p,
                                            std::span<const double> delivered);

/// Two-echelon IRP instance. Immutable after construction.
///
/// Vertices are indexed densely: suppliers [0, nU), satellites [nU, nU+nS),
/// customers [nU+nS, nU+nS+nN). Satellite/customer accessors take the local
/// index (0-based within their group).
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<SupplierData> suppliers, std::vector<SatelliteData> satellites,
           std::vector<CustomerData> customers, int horizon, Fleet first, Fleet second,
           std::vector<EdgeOverride> overrides = {}, bool round_distances = false);

  int horizon() const { return horizon_; }
  int num_suppliers() const { return static_cast<int>(suppliers_.size()); }
  int num_satellites() const { return static_cast<int>(satellites_.size()); }
  int num_customers() const { return static_cast<int>(customers_.size()); }
  int num_vertices() const { return num_suppliers() + num_satellites() + num_customers(); }

  const std::vector<SupplierData>& suppliers() const { return suppliers_; }
  const std::vector<SatelliteData>& satellites() const { return satellites_; }
  const std::vector<CustomerData>& customers() const { return customers_; }
  const SatelliteData& satellite(int s) const { return satellites_.at(s); }
  const CustomerData& customer(int c) const { return customers_.at(c); }
  const Fleet& first_fleet() const { return first_; }
  const Fleet& second_fleet() const { return second_; }
  const std::vector<EdgeOverride>& overrides() const { return overrides_; }
  bool round_distances() const { return round_distances_; }

  int supplier_vertex(int u) const { return u; }
  int satellite_vertex(int s) const { return num_suppliers() + s; }
  int customer_vertex(int c) const { return num_suppliers() + num_satellites() + c; }

  double cost(int v, int w) const { return cost_[static_cast<std::size_t>(v) * num_vertices() + w]; }
  double customer_cost(int a, int b) const { return cost(customer_vertex(a), customer_vertex(b)); }
  double satellite_customer_cost(int s, int c) const {
    return cost(satellite_vertex(s), customer_vertex(c));
  }

  /// Demand of customer c in period h (1-based).
  Quantity demand(int c, int h) const;
  InventoryProfile profile(int c) const;
  const CustomerTables& tables(int c) const;
  Quantity residual_demand(int c, int h) const { return tables(c).residual_demand.at(h); }

  /// Local customer index for a node id, or -1.
  int customer_index(int id) const;
  int satellite_index(int id) const;
  int supplier_index(int id) const;

  /// Travel cost of the closed tour satellite -> seq... -> satellite.
  double route_cost(int s, std::span<const int> customers) const;

  /// Returns the list of violated instance invariants (empty when valid).
  std::vector<std::string> check_invariants() const;

 private:
  std::vector<SupplierData> suppliers_;
  std::vector<SatelliteData> satellites_;
  std::vector<CustomerData> customers_;
  int horizon_ = 0;
  Fleet first_;
  Fleet second_;
  std::vector<EdgeOverride> overrides_;
  bool round_distances_ = false;
  std::vector<double> cost_;
  std::vector<CustomerTables> tables_;
};

/// Canonical text format (see README). Throws InputError on malformed input.
Instance read_instance(std::istream& in, bool round_distances = false);
Instance read_instance_file(const std::string& path, bool round_distances = false);
void write_instance(std::ostream& out, const Instance& inst);
std::string instance_to_string(const Instance& inst);

/// One sub-delivery pattern of a column: q[h] for h = 0..tau+1 (only entries
/// in the customer's delivery periods are nonzero).
struct CustomerDelivery {
  int customer = 0;
  std::vector<Quantity> q;

  Quantity total() const;
};

/// Holding cost at the customers of an RDP delivered in period t:
/// sum_c f_c^H sum_{t<=h<=tau} b_c^h with b_c^h the quantity reserved for later periods.
double rdp_holding_cost(const Instance& inst, int t, std::span<const CustomerDelivery> rdp);

/// Travel plus customer holding cost of route (s, sequence) with RDP delivered in t.
/// Checks every sub-delivery lies in [0, UB]; throws ContractViolation otherwise.
double column_cost(const Instance& inst, int s, int t, std::span<const int> sequence,
                   std::span<const CustomerDelivery> rdp);

}  // namespace teirp
