#include <gtest/gtest.h>

#include <map>
#include <set>

#include "ncfield/ncfield.hpp"
#include "support/brute_force.hpp"

using namespace ncfield;

namespace {

NcTree star4() { return NcTree(4, {{1, 2}, {1, 3}, {1, 4}}); }

// Both trees drawn on one circle of 2n points: dual vertex j at slot 2j-2,
// primal vertex j at slot 2j-1. Chords cross iff their slots interleave.
bool geometric_cross(Edge primal, Edge dualedge) {
  auto pa = 2 * primal.a - 1, pb = 2 * primal.b - 1;
  auto da = 2 * dualedge.a - 2, db = 2 * dualedge.b - 2;
  auto inside = [&](int x) { return pa < x && x < pb; };
  return inside(da) != inside(db);
}

// Sweep the circle anticlockwise starting just after j, collecting edges.
std::vector<Edge> sweep_order(const NcTree& t, int j) {
  std::vector<Edge> out;
  for (int step = 1; step < t.n(); ++step) {
    int m = (j - 1 + step) % t.n() + 1;
    Edge e(j, m);
    if (t.edge_index(e) >= 0) out.push_back(e);
  }
  return out;
}

}  // namespace

TEST(NcTreeValidate, Examples) {
  EXPECT_TRUE(validate(NcTree(2, {{1, 2}})));
  EXPECT_TRUE(validate(NcTree(1, {})));
  EXPECT_TRUE(validate(NcTree(4, {{1, 2}, {2, 3}, {3, 4}})));

  auto bad = validate(NcTree(4, {{1, 3}, {2, 4}, {1, 2}}));
  ASSERT_FALSE(bad);
  EXPECT_NE(bad.violated.find("cross"), std::string::npos);
  ASSERT_EQ(bad.witnesses.size(), 2u);
  EXPECT_EQ(bad.witnesses[0], Edge(1, 3));
  EXPECT_EQ(bad.witnesses[1], Edge(2, 4));
}

TEST(NcTreeValidate, StructuralViolations) {
  EXPECT_FALSE(validate(NcTree(4, {{1, 2}, {2, 3}})));          // too few edges
  EXPECT_FALSE(validate(NcTree(4, {{1, 2}, {2, 3}, {1, 3}})));  // cycle, vertex 4 isolated
  EXPECT_FALSE(validate(NcTree(3, {{1, 2}, {1, 2}})));          // repeated edge
  EXPECT_FALSE(validate(NcTree(3, {{1, 5}, {1, 2}})));          // label out of range
  EXPECT_FALSE(validate(NcTree(0, {})));
  EXPECT_THROW(require_valid(NcTree(4, {{1, 3}, {2, 4}, {1, 2}})), Error);
}

TEST(NcTreeEdgeOrder, Examples) {
  EXPECT_EQ(edge_order_at(star4(), 1), (std::vector<Edge>{{1, 2}, {1, 3}, {1, 4}}));
  EXPECT_EQ(edge_order_at(star4(), 3), (std::vector<Edge>{{1, 3}}));
  NcTree path(4, {{1, 4}, {4, 3}, {3, 2}});
  EXPECT_EQ(edge_order_at(path, 4), (std::vector<Edge>{{1, 4}, {3, 4}}));
}

TEST(NcTreeEdgeOrder, AgreesWithCircularSweep) {
  for (int n = 2; n <= 7; ++n)
    for (const auto& t : enumerate(n))
      for (int j = 1; j <= n; ++j) ASSERT_EQ(edge_order_at(t, j), sweep_order(t, j)) << canonical_code(t) << " j=" << j;
}

TEST(NcTreeSepal, Examples) {
  EXPECT_TRUE(sepal_zones(NcTree(2, {{1, 2}})).empty());
  auto z = sepal_zones(star4());
  ASSERT_EQ(z.size(), 2u);
  EXPECT_EQ(z[0].index, 1);
  EXPECT_EQ(z[0].vertex, 1);
  EXPECT_EQ(z[0].first, Edge(1, 2));
  EXPECT_EQ(z[0].second, Edge(1, 3));
  EXPECT_EQ(z[1].index, 2);
  EXPECT_EQ(z[1].first, Edge(1, 3));
  EXPECT_EQ(z[1].second, Edge(1, 4));
}

TEST(NcTreeSepal, CountAndNumbering) {
  for (int n = 2; n <= 7; ++n) {
    for (const auto& t : enumerate(n)) {
      auto zones = sepal_zones(t);
      ASSERT_EQ(static_cast<int>(zones.size()), n - 2);
      auto deg = incidence(t);
      // m = (n_1 - 1) + ... + (n_{j-1} - 1) + l
      int m = 0;
      for (int j = 1; j <= n; ++j) {
        auto order = edge_order_at(t, j);
        for (int l = 1; l < deg[j]; ++l) {
          const auto& d = zones.at(m);
          ++m;
          EXPECT_EQ(d.index, m);
          EXPECT_EQ(d.vertex, j);
          EXPECT_EQ(d.first, order[l - 1]);
          EXPECT_EQ(d.second, order[l]);
          EXPECT_EQ(t.edges()[d.first_edge], d.first);
          EXPECT_EQ(t.edges()[d.second_edge], d.second);
        }
      }
    }
  }
}

TEST(NcTreeRotate, GroupAction) {
  NcTree path(4, {{1, 2}, {2, 3}, {3, 4}});
  EXPECT_EQ(rotate(path, 1), NcTree(4, {{2, 3}, {3, 4}, {1, 4}}));
  for (int n = 1; n <= 6; ++n) {
    for (const auto& t : enumerate(n)) {
      EXPECT_EQ(rotate(t, 0), t);
      for (int s = 0; s < n; ++s) {
        EXPECT_TRUE(validate(rotate(t, s)));
        EXPECT_EQ(rotate(rotate(t, s), n - s), t);
        for (int s2 = 0; s2 < n; ++s2) EXPECT_EQ(rotate(rotate(t, s), s2), rotate(t, (s + s2) % n));
      }
      EXPECT_EQ(rotate(t, -1), rotate(t, n - 1));
    }
  }
}

TEST(NcTreeDual, SmallCases) {
  EXPECT_EQ(dual(NcTree(2, {{1, 2}})), NcTree(2, {{1, 2}}));
  NcTree star3(3, {{1, 2}, {1, 3}});
  auto d = dual(star3);
  auto deg = incidence(d);
  EXPECT_EQ(*std::max_element(deg.begin(), deg.end()), 2);  // a path
  auto dd = dual(d);
  auto deg2 = incidence(dd);
  EXPECT_EQ(*std::max_element(deg2.begin(), deg2.end()), 2);  // star on 3 vertices is also a path
}

TEST(NcTreeDual, EachDualEdgeCrossesOnePrimalEdge) {
  for (int n = 2; n <= 6; ++n) {
    for (const auto& t : enumerate(n)) {
      auto d = dual(t);
      ASSERT_TRUE(validate(d)) << canonical_code(t);
      for (const auto& de : d.edges()) {
        int crossings = 0;
        for (const auto& pe : t.edges()) crossings += geometric_cross(pe, de);
        EXPECT_EQ(crossings, 1) << canonical_code(t) << " dual edge " << de.a << "-" << de.b;
      }
      for (const auto& pe : t.edges()) {
        int crossings = 0;
        for (const auto& de : d.edges()) crossings += geometric_cross(pe, de);
        EXPECT_EQ(crossings, 1);
      }
    }
  }
}

TEST(NcTreeDual, DoubleDualIsOneFixedRotation) {
  for (int n = 2; n <= 7; ++n) {
    std::set<int> shifts;
    for (const auto& t : enumerate(n)) {
      auto dd = dual(dual(t));
      std::set<int> here;
      for (int s = 0; s < n; ++s)
        if (rotate(t, s) == dd) here.insert(s);
      ASSERT_FALSE(here.empty()) << canonical_code(t);
      if (shifts.empty()) {
        shifts = here;
      } else {
        std::set<int> both;
        std::set_intersection(shifts.begin(), shifts.end(), here.begin(), here.end(), std::inserter(both, both.end()));
        shifts = both;
      }
    }
    EXPECT_TRUE(shifts.count(1 % n)) << "n=" << n;
  }
}

TEST(NcTreeSymmetry, Examples) {
  auto s2 = symmetry_order(NcTree(2, {{1, 2}}));
  EXPECT_EQ(s2.order, 2);
  EXPECT_EQ(s2.fixed_edge, Edge(1, 2));
  auto s4 = symmetry_order(NcTree(4, {{1, 3}, {1, 2}, {3, 4}}));
  EXPECT_EQ(s4.order, 2);
  EXPECT_EQ(s4.fixed_edge, Edge(1, 3));
  for (const auto& t : enumerate(5)) EXPECT_EQ(symmetry_order(t).order, 1);
}

TEST(NcTreeSymmetry, OrbitSizes) {
  for (int n = 2; n <= 8; ++n) {
    std::map<std::string, std::set<std::string>> orbits;
    for (const auto& t : enumerate(n)) orbits[rotation_class_code(t)].insert(canonical_code(t));
    long total = 0;
    for (const auto& [rep, members] : orbits) total += static_cast<long>(members.size());
    EXPECT_EQ(BigCount(total), count_A(n));
    EXPECT_EQ(BigCount(orbits.size()), count_Ar(n));
    for (const auto& t : enumerate(n)) {
      auto size = orbits[rotation_class_code(t)].size();
      auto sym = symmetry_order(t);
      EXPECT_TRUE(size == static_cast<std::size_t>(n) || 2 * size == static_cast<std::size_t>(n));
      EXPECT_EQ(2 * size == static_cast<std::size_t>(n) && n > 1, sym.order == 2) << canonical_code(t);
      if (sym.order == 2) {
        ASSERT_TRUE(sym.fixed_edge.has_value());
        EXPECT_EQ(n % 2, 0);
        EXPECT_EQ(sym.fixed_edge->b - sym.fixed_edge->a, n / 2);
        int antipodal = 0;
        for (const auto& e : t.edges()) antipodal += (e.b - e.a == n / 2);
        EXPECT_EQ(antipodal, 1);
      }
    }
  }
}

TEST(NcTreeCodes, InjectiveAndFormat) {
  std::set<std::string> codes;
  for (const auto& t : enumerate(4)) codes.insert(canonical_code(t));
  EXPECT_EQ(codes.size(), 12u);
  EXPECT_EQ(canonical_code(NcTree(4, {{3, 4}, {1, 2}, {1, 3}})), "4;1-2,1-3,3-4");
  std::set<std::string> classes;
  for (const auto& t : enumerate(4)) {
    classes.insert(rotation_class_code(t));
    for (int s = 0; s < 4; ++s) EXPECT_EQ(rotation_class_code(rotate(t, s)), rotation_class_code(t));
  }
  EXPECT_EQ(classes.size(), 4u);
}

TEST(NcTreeEnumerate, MatchesBruteForce) {
  for (int n = 1; n <= 7; ++n) {
    std::set<std::string> expected;
    support::brute_force_nc_trees(n, [&](const auto& es) { expected.insert(support::chord_key(n, es)); });
    std::set<std::string> got;
    std::string prev;
    for (const auto& t : enumerate(n)) {
      ASSERT_TRUE(validate(t));
      std::vector<support::Chord> es;
      for (const auto& e : t.edges()) es.emplace_back(e.a, e.b);
      got.insert(support::chord_key(n, es));
      auto code = canonical_code(t);
      EXPECT_LT(prev, code);  // lexicographic stream, no repeats
      prev = code;
    }
    EXPECT_EQ(got, expected) << "n=" << n;
  }
  EXPECT_EQ(enumerate(1).size(), 1u);
  EXPECT_EQ(enumerate(3).size(), 3u);
  EXPECT_EQ(enumerate(5).size(), 55u);
}

TEST(NcTreeEnumerate, CapIsEnforced) {
  try {
    enumerate(8, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResourceLimit);
  }
  EXPECT_THROW(enumerate(0), Error);
  int seen = 0;
  for_each_nc_tree(6, [&](const NcTree&) { ++seen; });
  EXPECT_EQ(seen, 273);
}
