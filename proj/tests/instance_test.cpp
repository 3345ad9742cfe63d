#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/inventory_sim.hpp"
#include "teirp/instance.hpp"

namespace teirp {
namespace {

InventoryProfile prof(Quantity i0, std::vector<Quantity> d, Quantity cap = 20) {
  return InventoryProfile{i0, cap, std::move(d)};
}

TEST(ResidualInventory, Examples) {
  EXPECT_EQ(residual_inventory(prof(10, {4, 4, 4})), (std::vector<Quantity>{6, 2, 0}));
  EXPECT_EQ(residual_inventory(prof(0, {4, 4, 4})), (std::vector<Quantity>{0, 0, 0}));
  EXPECT_EQ(residual_inventory(prof(100, {4, 4, 4}, 200)), (std::vector<Quantity>{96, 92, 88}));
}

TEST(ResidualDemand, Examples) {
  EXPECT_EQ(residual_demand(prof(10, {4, 4, 4})), (std::vector<Quantity>{0, 0, 2}));
  EXPECT_EQ(residual_demand(prof(0, {4, 4, 4})), (std::vector<Quantity>{4, 4, 4}));
  EXPECT_EQ(residual_demand(prof(12, {4, 4, 4})), (std::vector<Quantity>{0, 0, 0}));
}

TEST(DeliveryPeriods, Examples) {
  EXPECT_EQ(delivery_periods(prof(10, {4, 4, 4}), 1), (std::vector<int>{3, 4}));
  EXPECT_EQ(delivery_periods(prof(10, {4, 4, 4}), 3), (std::vector<int>{3, 4}));
  EXPECT_EQ(delivery_periods(prof(0, {4, 4, 4}, 4), 1), (std::vector<int>{1}));
  EXPECT_THROW(delivery_periods(prof(0, {4, 4, 4}), 0), InputError);
  EXPECT_THROW(delivery_periods(prof(0, {4, 4, 4}), 4), InputError);
}

TEST(SubdeliveryBound, Examples) {
  const auto p = prof(10, {4, 4, 4});
  EXPECT_EQ(subdelivery_upper_bound(p, 1, 3), 2);
  EXPECT_EQ(subdelivery_upper_bound(p, 1, 4), 8);
  EXPECT_EQ(subdelivery_upper_bound(p, 3, 4), 16);
  EXPECT_THROW(subdelivery_upper_bound(p, 1, 2), ContractViolation);
}

TEST(GammaSets, Examples) {
  const auto g = gamma_sets(prof(10, {4, 4, 4}));
  EXPECT_EQ(g.t_minus[3], (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(g.gamma_minus[2], (std::vector<int>{1, 2}));
  EXPECT_EQ(g.gamma_plus[1], (std::vector<int>{1, 2, 3}));
}

// Random profiles checked against the simulator; the acceptance binary runs the
// full 1000-triple sweep.
TEST(DerivedQuantities, MatchSimulator) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int tau = std::uniform_int_distribution<int>(1, 4)(rng);
    const Quantity cap = std::uniform_int_distribution<Quantity>(1, 15)(rng);
    InventoryProfile p{std::uniform_int_distribution<Quantity>(0, cap)(rng), cap, {}};
    for (int h = 0; h < tau; ++h) p.demand.push_back(std::uniform_int_distribution<Quantity>(0, cap)(rng));
    const auto tb = build_customer_tables(p);
    const auto left = testing::sim_initial_left(p);
    const auto unc = testing::sim_uncovered(p);
    for (int h = 0; h <= tau; ++h) EXPECT_EQ(tb.residual_inventory[h], left[h]);
    for (int h = 1; h <= tau; ++h) EXPECT_EQ(tb.residual_demand[h], unc[h]);
    for (int t = 1; t <= tau; ++t)
      for (int h = t; h <= tau + 1; ++h) {
        const long long sim = testing::sim_max_subdelivery(p, t, h);
        if (tb.can_deliver(t, h)) {
          EXPECT_EQ(tb.ub[t][h], sim) << "t=" << t << " h=" << h;
        } else {
          EXPECT_EQ(sim, 0) << "t=" << t << " h=" << h;
        }
      }
  }
}

TEST(FifoSplit, SplitsByConsumptionPeriod) {
  const auto p = prof(10, {4, 4, 4});
  const std::vector<double> delivered{10, 0, 0};
  const auto split = fifo_split(p, delivered);
  EXPECT_DOUBLE_EQ(split[1][3], 2.0);
  EXPECT_DOUBLE_EQ(split[1][4], 8.0);
  const std::vector<double> short_of_demand{0, 0, 1};
  EXPECT_THROW(fifo_split(p, short_of_demand), ContractViolation);
}

Instance one_customer(double hold) {
  // satellite at origin, customer 5 units away: round trip costs 10
  std::vector<SupplierData> u{{1, {0, 10}}};
  std::vector<SatelliteData> s{{2, {0, 0}, 50, 0, 0.1}};
  std::vector<CustomerData> c{{3, {3, 4}, 20, 10, hold, {4, 4, 4}}};
  return Instance(u, s, c, 3, {1, 50}, {1, 20});
}

TEST(ColumnCost, Examples) {
  const auto inst = one_customer(0.5);
  const std::vector<int> seq{0};
  EXPECT_NEAR(column_cost(inst, 0, 1, seq, {}), 10.0, 1e-9);

  CustomerDelivery d{0, {0, 0, 0, 2, 0}};
  std::vector<CustomerDelivery> rdp{d};
  EXPECT_NEAR(column_cost(inst, 0, 1, seq, rdp), 12.0, 1e-9);

  rdp[0].q[4] = 8;
  const double got = column_cost(inst, 0, 1, seq, rdp);
  // independent: units of the delivery still in stock at the end of each period
  const auto sim = testing::simulate(inst.profile(0), {0, 0, 0, 0}, 1, 10);
  ASSERT_TRUE(sim.feasible);
  double held = 0;
  for (int h = 1; h <= 3; ++h) held += 0.5 * static_cast<double>(sim.tracked_stock_end[h]);
  EXPECT_NEAR(got, 10.0 + held, 1e-9);
  EXPECT_NEAR(got, 24.0, 1e-9);

  rdp[0].q[4] = 9;
  EXPECT_THROW(column_cost(inst, 0, 1, seq, rdp), ContractViolation);
  rdp[0].q[4] = 0;
  rdp[0].q[2] = 1;
  EXPECT_THROW(column_cost(inst, 0, 1, seq, rdp), ContractViolation);
}

TEST(InstanceModel, InvariantsFlagBadData) {
  std::vector<SupplierData> u{{1, {0, 0}}};
  std::vector<SatelliteData> s{{2, {1, 0}, 5, 6, 0.1}};
  std::vector<CustomerData> c{{3, {2, 0}, 5, 1, 0.1, {1}}};
  Instance bad(u, s, c, 1, {1, 10}, {1, 20});
  const auto v = bad.check_invariants();
  ASSERT_EQ(v.size(), 2u);
}

TEST(InstanceModel, RejectsDuplicateIds) {
  std::vector<SupplierData> u{{1, {0, 0}}};
  std::vector<SatelliteData> s{{1, {1, 0}, 5, 0, 0.1}};
  EXPECT_THROW(Instance(u, s, {}, 1, {1, 10}, {1, 5}), InputError);
}

TEST(InstanceFormat, RoundTrip) {
  const std::string text =
      "1 2 2 2 1 30 2 10\n"
      "# supplier\n"
      "1 0 0\n"
      "2 3 4 40 5 0.05\n"
      "3 -3 4 40 0 0.05\n"
      "4 6 8 12 2 0.1 3 4\n"
      "5 -6 8 12 0 0.25 1 1\n"
      "edge 2 4 7.5\n";
  std::istringstream in(text);
  const auto inst = read_instance(in);
  EXPECT_EQ(inst.num_customers(), 2);
  EXPECT_DOUBLE_EQ(inst.cost(inst.satellite_vertex(0), inst.customer_vertex(0)), 7.5);
  EXPECT_DOUBLE_EQ(inst.cost(inst.customer_vertex(0), inst.satellite_vertex(0)), 7.5);
  EXPECT_DOUBLE_EQ(inst.cost(inst.supplier_vertex(0), inst.satellite_vertex(0)), 5.0);
  EXPECT_EQ(inst.demand(0, 2), 4);
  std::istringstream again(instance_to_string(inst));
  const auto back = read_instance(again);
  EXPECT_EQ(instance_to_string(back), instance_to_string(inst));
}

TEST(InstanceFormat, MalformedInput) {
  for (const char* text : {"1 1 1 2 1 10 1 5\n1 0 0\n2 0 0 10 0 0.1\n3 1 1 10 0 0.1 1\n",
                           "1 1 0 1 1 10 1 20\n1 0 0\n2 0 0 10 0 0.1\n",
                           "1 1 0 1 1 10 1 5\n1 0 0\n2 0 0 10 0 0.1 extra\n",
                           "1 1 0 1 1 10 1 5\n1 0 0\n2 0 0 10 0 0.1\nbogus 1 2 3\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_instance(in), InputError) << text;
  }
}

TEST(InstanceModel, RoundedDistances) {
  std::vector<SupplierData> u{{1, {0, 0}}};
  std::vector<SatelliteData> s{{2, {1, 1}, 5, 0, 0.1}};
  Instance raw(u, s, {}, 1, {1, 10}, {1, 5});
  Instance rounded(u, s, {}, 1, {1, 10}, {1, 5}, {}, true);
  EXPECT_NEAR(raw.cost(0, 1), std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(rounded.cost(0, 1), 1.0);
}

}  // namespace
}  // namespace teirp
