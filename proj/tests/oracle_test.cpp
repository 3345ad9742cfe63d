#include <gtest/gtest.h>

#include "teirp/bnp.hpp"
#include "teirp/generator.hpp"
#include "teirp/oracle.hpp"

namespace teirp {
namespace {

TEST(Oracle, ZeroDemandPaysOnlySatelliteHolding) {
  std::vector<SupplierData> u{{1, {0, -50}}};
  std::vector<SatelliteData> s{{2, {0, 0}, 100, 30, 0.2}, {3, {10, 0}, 100, 10, 0.5}};
  std::vector<CustomerData> c{{4, {5, 5}, 20, 7, 0.3, {0, 0, 0}}, {5, {7, 1}, 20, 0, 0.3, {0, 0, 0}}};
  const Instance inst(u, s, c, 3, {1, 50}, {2, 10});
  const auto o = oracle_solve(inst);
  ASSERT_TRUE(o);
  EXPECT_NEAR(o->objective, 3 * (0.2 * 30 + 0.5 * 10), 1e-9);
  EXPECT_TRUE(o->plan.first.empty());
  EXPECT_TRUE(o->plan.second.empty());
  EXPECT_TRUE(validate_plan(inst, o->plan).ok());
}

TEST(Oracle, SingleCustomerSinglePeriodByHand) {
  // s2 holds too little, so one first-echelon trip is needed:
  //   supplier -> s1 (20) + s1 -> customer round trip (10) + s2 stock 3 held (0.3) = 30.3
  //   supplier -> s2 (2 * sqrt(200)) + s2 round trip (10)                          = 38.28
  //   one trip through both satellites costs 34.14 before any delivery
  std::vector<SupplierData> u{{1, {0, -10}}};
  std::vector<SatelliteData> s{{2, {0, 0}, 100, 0, 0.1}, {3, {10, 0}, 100, 3, 0.1}};
  std::vector<CustomerData> c{{4, {5, 0}, 10, 0, 0.2, {5}}};
  const Instance inst(u, s, c, 1, {1, 100}, {1, 10});
  const auto o = oracle_solve(inst);
  ASSERT_TRUE(o);
  EXPECT_NEAR(o->objective, 30.3, 1e-9);
  ASSERT_EQ(o->plan.first.size(), 1u);
  EXPECT_EQ(o->plan.first[0].satellites, std::vector<int>{2});
  ASSERT_EQ(o->plan.second.size(), 1u);
  EXPECT_EQ(o->plan.second[0].satellite, 2);
  EXPECT_TRUE(validate_plan(inst, o->plan).ok());
}

TEST(Oracle, InfeasibleAndRefused) {
  std::vector<SupplierData> u{{1, {0, -10}}};
  std::vector<SatelliteData> s{{2, {0, 0}, 100, 0, 0.1}};
  std::vector<CustomerData> c{{3, {5, 0}, 30, 0, 0.2, {20}}};
  EXPECT_FALSE(oracle_solve(Instance(u, s, c, 1, {1, 100}, {1, 10})));
  EXPECT_THROW(oracle_solve(generate_micro({6, 2, 2, 2, 1, 1})), InputError);
  EXPECT_THROW(oracle_solve(generate_micro({3, 4, 2, 2, 1, 1})), InputError);
}

TEST(Oracle, AgreesWithBranchAndPrice) {
  for (std::uint64_t seed = 3; seed <= 4; ++seed) {
    const auto inst = generate_micro({4, 2, 2, 2, 1, seed});
    const auto o = oracle_solve(inst);
    ASSERT_TRUE(o);
    EXPECT_TRUE(validate_plan(inst, o->plan).ok());
    const auto r = branch_and_price(inst);
    ASSERT_EQ(r.status, "optimal");
    EXPECT_NEAR(o->objective, *r.objective, 1e-6 * o->objective);
  }
}

}  // namespace
}  // namespace teirp
