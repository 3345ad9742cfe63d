#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "teirp/instance.hpp"
#include "teirp/random.hpp"

namespace teirp {

struct Circle {
  Point center;
  double radius = 0.0;
};

/// Smallest circle containing every point, by exhaustive candidate circles.
Circle enclosing_circle(std::span<const Point> pts);

/// `count` facilities in a ring around `center`: facility i lies in the i-th
/// equal angular sector at a radius drawn from [inner * R, outer * R].
/// R = 0 is treated as R = 1.
std::vector<Point> place_facilities(Point center, double radius, int count, double inner,
                                    double outer, Rng& rng);

/// Single-depot IRP data in the common benchmark layout:
///   line 1: nodes horizon vehicleCapacity
///   supplier: id x y startInventory production holdingCost
///   customer: id x y startInventory maxLevel minLevel demand holdingCost
struct SourceIrp {
  Point supplier;
  Quantity supplier_capacity = 0;  // start inventory, read as C_u^A
  Quantity production = 0;
  double supplier_holding = 0.0;
  Quantity vehicle_capacity = 0;
  int horizon = 0;
  std::vector<CustomerData> customers;
};

SourceIrp read_source_irp(std::istream& in);
SourceIrp read_source_irp_file(const std::string& path);

struct CapacityPlan {
  std::vector<Quantity> satellite_capacity;
  std::vector<Quantity> satellite_initial;
  Fleet first;
  Fleet second;
};

/// Satellite capacities/inventories and fleets from the source data.
/// `coefficients` (one per satellite) replaces the random draws when given.
CapacityPlan derive_capacities(Quantity supplier_capacity, Quantity production,
                               Quantity vehicle_capacity, Quantity total_residual_demand,
                               int suppliers, int satellites, int k2, Rng& rng,
                               std::span<const double> coefficients = {});

struct GenConfig {
  int suppliers = 1;
  int satellites = 2;
  int k2 = 2;
  std::uint64_t seed = 1;
};

Instance transform_source(const SourceIrp& src, const GenConfig& cfg);

struct MicroConfig {
  int customers = 4;
  int horizon = 2;
  int k2 = 2;
  int satellites = 2;
  int suppliers = 1;
  std::uint64_t seed = 1;
};

/// Small random instance with a guaranteed feasible just-in-time solution.
/// Throws InputError when 100 draws in a row fail the feasibility check.
Instance generate_micro(const MicroConfig& cfg);

}  // namespace teirp
