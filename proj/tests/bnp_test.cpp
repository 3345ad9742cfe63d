#include <gtest/gtest.h>

#include "support/enumerate.hpp"
#include "teirp/bnp.hpp"
#include "teirp/generator.hpp"

namespace teirp {
namespace {

BranchCandidate cand(DecisionType type, double v, int index = 0) {
  BranchCandidate c;
  c.decision.type = type;
  c.decision.customer = index;
  c.value = v;
  return c;
}

TEST(Gap, Examples) {
  EXPECT_NEAR(*relative_gap(50.0, 100.0), 1.0, 1e-12);
  EXPECT_NEAR(*relative_gap(100.0, 100.0), 0.0, 1e-12);
  EXPECT_FALSE(relative_gap(std::nullopt, 100.0));
  EXPECT_FALSE(relative_gap(50.0, std::nullopt));
}

TEST(SelectBranch, Examples) {
  using T = DecisionType;
  // the first-echelon total goes first whatever the rest
  auto pick = select_branch({cand(T::kFirstTotal, 2.5), cand(T::kCustomerFlow, 0.5)});
  ASSERT_TRUE(pick);
  EXPECT_EQ(pick->decision.type, T::kFirstTotal);
  // closest to one half among the first-echelon families
  pick = select_branch({cand(T::kFirstTotal, 2.0), cand(T::kFirstPeriod, 0.9), cand(T::kFirstRoute, 0.4)});
  EXPECT_EQ(pick->decision.type, T::kFirstRoute);
  // a customer-flow candidate inside [0.25, 0.75] beats a closer edge
  pick = select_branch({cand(T::kSecondTotal, 3.0), cand(T::kCustomerFlow, 0.6), cand(T::kEdge, 0.5)});
  EXPECT_EQ(pick->decision.type, T::kCustomerFlow);
  // outside the window the closest one wins
  pick = select_branch({cand(T::kCustomerFlow, 0.9), cand(T::kSecondPeriod, 1.2)});
  EXPECT_EQ(pick->decision.type, T::kSecondPeriod);
  // equal distance: the lower index
  pick = select_branch({cand(T::kCustomerPeriod, 0.4, 0), cand(T::kCustomerPeriod, 0.6, 1)});
  EXPECT_EQ(pick->decision.customer, 0);
  EXPECT_FALSE(select_branch({cand(T::kFirstTotal, 1.0), cand(T::kEdge, 2.0 + 1e-9)}));
}

TEST(BranchCandidates, MatchTheMasterSolution) {
  const auto inst = generate_micro({3, 2, 2, 2, 1, 4});
  Master m(inst, enumerate_first_echelon(inst));
  for (const auto& col : testing::full_universe(inst)) m.add_column(col);
  ASSERT_EQ(m.solve(), lp::Status::kOptimal);
  const auto cands = branch_candidates(m);
  double customer_total = 0.0, visits = 0.0;
  for (const auto& c : cands)
    if (c.decision.type == DecisionType::kCustomerFlow) customer_total += c.value;
  for (std::size_t k = 0; k < m.pool().size(); ++k)
    visits += m.alpha(static_cast<int>(k)) * static_cast<double>(m.pool()[k].sequence.size());
  EXPECT_NEAR(customer_total, visits, 1e-9);
  // every edge candidate value equals the master's own row activity
  for (const auto& c : cands) {
    if (c.decision.type != DecisionType::kEdge) continue;
    double v = 0.0;
    for (std::size_t k = 0; k < m.pool().size(); ++k)
      if (m.pool()[k].period == c.decision.period)
        v += m.alpha(static_cast<int>(k)) * m.pool()[k].edge_traversals(inst, c.decision.vertex_a, c.decision.vertex_b);
    EXPECT_NEAR(c.value, v, 1e-9);
  }
}

BnpOptions quick(SearchMode mode = SearchMode::kBestFirst) {
  BnpOptions o;
  o.search = mode;
  o.time_limit = 120;
  o.integer_rmp_seconds = 10;
  return o;
}

TEST(BranchAndPrice, SolvesMicroInstancesWithValidPlans) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto inst = generate_micro({3, 2, 2, 2, 1, seed});
    const auto r = branch_and_price(inst, quick());
    ASSERT_EQ(r.status, "optimal") << seed;
    ASSERT_TRUE(r.solution);
    const auto v = validate_plan(inst, *r.solution);
    EXPECT_TRUE(v.ok()) << seed << ": " << (v.violations.empty() ? "" : v.violations[0])
                        << (v.schema_errors.empty() ? "" : v.schema_errors[0]);
    EXPECT_GE(*r.objective, r.root_bound - 1e-6);
    EXPECT_NEAR(*r.gap_f, 0.0, 1e-12);
    EXPECT_GE(r.nodes, 1);
  }
}

TEST(BranchAndPrice, SearchModesAgree) {
  for (std::uint64_t seed = 7; seed <= 10; ++seed) {
    const auto inst = generate_micro({4, 2, 2, 2, 1, seed});
    const auto a = branch_and_price(inst, quick(SearchMode::kBestFirst));
    const auto b = branch_and_price(inst, quick(SearchMode::kLocalDepthFirst));
    ASSERT_EQ(a.status, "optimal");
    ASSERT_EQ(b.status, "optimal");
    EXPECT_NEAR(*a.objective, *b.objective, 1e-6 * std::max(1.0, *a.objective)) << seed;
  }
}

TEST(BranchAndPrice, ReportIsReproducible) {
  const auto inst = generate_micro({4, 2, 2, 2, 1, 3});
  const auto a = report_to_json(branch_and_price(inst, quick()), false).dump();
  const auto b = report_to_json(branch_and_price(inst, quick()), false).dump();
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  EXPECT_TRUE(j["timeRootSec"].is_null());
  EXPECT_TRUE(validate_report(inst, j).ok());
}

TEST(BranchAndPrice, NodeLimit) {
  const auto inst = generate_micro({4, 3, 2, 2, 1, 5});
  auto o = quick();
  o.node_limit = 1;
  const auto r = branch_and_price(inst, o);
  EXPECT_EQ(r.nodes, 1);
  EXPECT_TRUE(r.status == "optimal" || r.status == "node_limit" || r.status == "no_solution");
}

}  // namespace
}  // namespace teirp
