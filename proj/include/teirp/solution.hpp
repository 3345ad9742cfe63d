#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "teirp/instance.hpp"

namespace teirp {

struct FirstEchelonUse {
  int period = 0;
  int supplier = 0;               // node id
  std::vector<int> satellites;    // node ids in visiting order
  double cost = 0.0;
};

struct DeliveryVector {
  int customer = 0;               // node id
  std::vector<double> q;          // q[h], h = 0..tau+1
};

struct SecondEchelonUse {
  int period = 0;
  int satellite = 0;              // node id
  std::vector<int> customers;     // node ids in visiting order
  std::vector<DeliveryVector> deliveries;
  double cost = 0.0;              // travel plus customer holding of the deliveries
};

struct PsiEntry {
  int satellite = 0;              // node id
  int from = 0;                   // entry period l (0 = initial stock)
  int to = 0;                     // exit period h (tau + 1 = end stock)
  double value = 0.0;
};

/// An integer plan: routes with their deliveries and the satellite stock flows.
struct Plan {
  double objective = 0.0;
  std::vector<FirstEchelonUse> first;
  std::vector<SecondEchelonUse> second;
  std::vector<PsiEntry> psi;
};

nlohmann::json plan_to_json(const Plan& plan);
/// Throws InputError on schema problems.
Plan plan_from_json(const nlohmann::json& j);

struct Validation {
  std::vector<std::string> schema_errors;
  std::vector<std::string> violations;

  bool ok() const { return schema_errors.empty() && violations.empty(); }
};

/// Recomputes inventories, capacities, fleet use, visits, satellite flows and
/// the cost of the plan; `objective` is the value the plan claims.
Validation validate_plan(const Instance& inst, const Plan& plan, double tolerance = 1e-6);

/// Same on a serialized report: checks its "solution" and "objective".
Validation validate_report(const Instance& inst, const nlohmann::json& report, double tolerance = 1e-6);

}  // namespace teirp
