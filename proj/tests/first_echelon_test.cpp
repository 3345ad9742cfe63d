#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "teirp/first_echelon.hpp"

namespace teirp {
namespace {

Instance with_satellites(std::vector<Point> sup, std::vector<Point> sat) {
  std::vector<SupplierData> u;
  int id = 1;
  for (auto p : sup) u.push_back({id++, p});
  std::vector<SatelliteData> s;
  for (auto p : sat) s.push_back({id++, p, 100, 0, 0.1});
  return Instance(u, s, {}, 3, {2, 100}, {2, 50});
}

TEST(FirstEchelon, RouteCounts) {
  auto two = with_satellites({{0, 0}}, {{1, 0}, {0, 1}});
  EXPECT_EQ(enumerate_first_echelon(two).size(), 3u);
  EXPECT_EQ(enumerate_first_echelon(two).size() * two.horizon(), 9u);
  auto three = with_satellites({{0, 0}}, {{1, 0}, {0, 1}, {2, 2}});
  EXPECT_EQ(enumerate_first_echelon(three).size(), 7u);
  EXPECT_EQ(enumerate_first_echelon(three).size() * three.horizon(), 21u);
}

TEST(FirstEchelon, CollinearTour) {
  auto inst = with_satellites({{0, 0}}, {{1, 0}, {2, 0}});
  const auto routes = enumerate_first_echelon(inst);
  const auto& both = routes[2];
  EXPECT_EQ(both.mask, 3u);
  EXPECT_NEAR(both.cost, 4.0, 1e-12);
  EXPECT_EQ(both.satellites, (std::vector<int>{0, 1}));
}

TEST(FirstEchelon, SupplierTieGoesToLowerId) {
  auto inst = with_satellites({{-1, 0}, {1, 0}}, {{0, 0}});
  const auto routes = enumerate_first_echelon(inst);
  ASSERT_EQ(routes.size(), 1u);
  EXPECT_EQ(routes[0].supplier, 0);
}

double closed_tour(const Instance& inst, int u, const std::vector<int>& sats) {
  double c = 0;
  int prev = inst.supplier_vertex(u);
  for (int s : sats) {
    c += inst.cost(prev, inst.satellite_vertex(s));
    prev = inst.satellite_vertex(s);
  }
  return c + inst.cost(prev, inst.supplier_vertex(u));
}

TEST(FirstEchelon, NoPermutationIsCheaper) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-50, 50);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> sup(3), sat(4);
    for (auto& p : sup) p = {coord(rng), coord(rng)};
    for (auto& p : sat) p = {coord(rng), coord(rng)};
    auto inst = with_satellites(sup, sat);
    const auto routes = enumerate_first_echelon(inst);
    ASSERT_EQ(routes.size(), 15u);
    for (const auto& r : routes) {
      EXPECT_NEAR(closed_tour(inst, r.supplier, r.satellites), r.cost, 1e-9);
      auto rev = r.satellites;
      std::reverse(rev.begin(), rev.end());
      EXPECT_NEAR(closed_tour(inst, r.supplier, rev), r.cost, 1e-9);
      std::vector<int> perm;
      for (int s = 0; s < 4; ++s)
        if (r.visits(s)) perm.push_back(s);
      EXPECT_EQ(perm.size(), r.satellites.size());
      for (int u = 0; u < 3; ++u) {
        auto p = perm;
        do {
          EXPECT_LE(r.cost, closed_tour(inst, u, p) + 1e-9);
        } while (std::next_permutation(p.begin(), p.end()));
      }
    }
  }
}

}  // namespace
}  // namespace teirp
