#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "ncfield/ncfield.hpp"
#include "support/random_fields.hpp"

using namespace ncfield;
using std::numbers::pi;

TEST(Combinatorial, LinearField) {
  auto ext = combinatorial_invariant(AntiPolyField::from_coefficients({0, 1}));
  EXPECT_EQ(ext.tree, NcTree(2, {{1, 2}}));
  EXPECT_TRUE(analytic_invariant(AntiPolyField::from_coefficients({0, 1}), ext.tree, ext.root_of_edge).eta.empty());
}

TEST(Combinatorial, QuadraticAtEpsI) {
  auto f = AntiPolyField::from_coefficients({Complex(0, -1), 0, 1});
  auto inv = extract_invariants(f);
  EXPECT_EQ(inv.tree, NcTree(3, {{1, 3}, {2, 3}}));
  ASSERT_EQ(inv.eta.size(), 1u);
  // |integral of z^2 - i between the roots| = 4/3, Im > 0 picks arg 3pi/4
  EXPECT_NEAR(std::abs(inv.eta[0] - std::polar(4.0 / 3.0, 3 * pi / 4)), 0, 1e-12);

  TraceConfig fine;
  fine.step_tolerance = 5e-11;
  EXPECT_EQ(extract_invariants(f, fine).tree, inv.tree);
}

TEST(Combinatorial, PerturbedCubic) {
  auto f = AntiPolyField::from_coefficients({Complex(0.05, 0.03), -1, 0, 1});
  auto ext = combinatorial_invariant(f);
  EXPECT_EQ(ext.tree.n(), 4);
  EXPECT_TRUE(validate(ext.tree));
  std::vector<NcTree> all = enumerate(4);
  EXPECT_NE(std::find(all.begin(), all.end(), ext.tree), all.end());
}

TEST(Combinatorial, RejectsNonGeneric) {
  try {
    combinatorial_invariant(AntiPolyField::from_coefficients({-1, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotGeneric);
  }
  try {
    zone_census(AntiPolyField::from_coefficients({0, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotGeneric);
  }
}

TEST(Analytic, ImEtaZeroOnTheRealRay) {
  // z^2 - 1 has Q(1) - Q(-1) = -4/3, real.
  auto f = AntiPolyField::from_coefficients({-1, 0, 1});
  NcTree t(3, {{1, 3}, {2, 3}});
  try {
    analytic_invariant(f, t, {0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImEtaZero);
  }
}

TEST(Census, Examples) {
  EXPECT_EQ(zone_census(AntiPolyField::from_coefficients({0, 1})).sepal_count, 0);
  EXPECT_EQ(zone_census(AntiPolyField::from_coefficients({0, 1})).petal_count, 4);
  std::mt19937_64 rng(3);
  auto c3 = zone_census(support::random_generic(3, rng).field);
  EXPECT_EQ(c3.sepal_count, 2);
  EXPECT_EQ(c3.petal_count, 8);
  auto c6 = zone_census(support::random_generic(6, rng).field);
  EXPECT_EQ(c6.sepal_count, 5);
  EXPECT_EQ(c6.petal_count, 14);
}

TEST(Properties, RandomCubicsPositiveFluxWithoutFlips) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 100; ++i) {
    auto s = support::random_generic(3, rng, 0.25, 0.0);
    for (const auto& e : s.extraction.pair.eta) EXPECT_GT(e.imag(), 0);
    for (bool f : s.extraction.eta.flipped) EXPECT_FALSE(f) << "orientation needed flipping";
  }
}

TEST(Properties, DeterministicAndToleranceStable) {
  std::mt19937_64 rng(103);
  TraceConfig fine;
  fine.step_tolerance = 5e-11;
  for (int degree = 2; degree <= 6; ++degree) {
    for (int i = 0; i < 4; ++i) {
      auto s = support::random_generic(degree, rng);
      auto again = extract_invariants(s.field);
      EXPECT_EQ(again.tree, s.extraction.pair.tree);
      EXPECT_EQ(again.eta, s.extraction.pair.eta);
      auto halved = extract_invariants(s.field, fine);
      EXPECT_EQ(halved.tree, s.extraction.pair.tree);
      EXPECT_LT(max_abs_diff(halved.eta, s.extraction.pair.eta), 1e-9);
      EXPECT_TRUE(validate(s.extraction.pair.tree));
      auto census = zone_census(s.field);
      EXPECT_EQ(census.sepal_count, degree - 1);
      EXPECT_EQ(census.petal_count, 2 * degree + 2);
    }
  }
}

TEST(Properties, OutgoingGraphIsTheDual) {
  std::mt19937_64 rng(107);
  for (int degree = 1; degree <= 6; ++degree) {
    for (int i = 0; i < 4; ++i) {
      auto s = support::random_generic(degree, rng);
      EXPECT_EQ(outgoing_graph(s.field), dual(s.extraction.pair.tree));
    }
  }
}

TEST(Properties, RotationEquivariance) {
  std::mt19937_64 rng(109);
  for (int degree = 2; degree <= 5; ++degree) {
    for (int i = 0; i < 5; ++i) {
      auto s = support::random_generic(degree, rng);
      const auto& p = s.extraction.pair;
      const int n = degree + 1;
      for (int r = 0; r < n; ++r) {
        auto g = rotated_field(s.field, r);
        // roots move by exp(2 pi i r / n)
        for (const auto& z : s.field.roots()) {
          Complex w = std::polar(1.0, 2 * pi * r / n) * z;
          double best = 1e9;
          for (const auto& u : g.roots()) best = std::min(best, std::abs(u - w));
          EXPECT_LT(best, 1e-10);
        }
        auto q = extract_invariants(g);
        EXPECT_EQ(q.tree, rotate(p.tree, r));
        EXPECT_LT(max_abs_diff(q.eta, rotate_eta(p.tree, p.eta, r)), 1e-9);
        EXPECT_LT(max_abs_diff(q.eta, rotate_eta_by_matching(p.tree, p.eta, r)), 1e-9);
      }
    }
  }
}

TEST(Classify, Examples) {
  std::mt19937_64 rng(113);
  auto s = support::random_generic(4, rng);
  auto self = classify_pair(s.field, s.field);
  EXPECT_TRUE(self.top_equivalent);
  EXPECT_TRUE(self.analytic_equivalent);
  ASSERT_TRUE(self.rotation.has_value());
  EXPECT_EQ(*self.rotation, 0);
  EXPECT_TRUE(self.analytic_up_to_rotation);

  auto g = rotated_field(s.field, 2);
  auto rot = classify_pair(s.field, g);
  ASSERT_TRUE(rot.rotation.has_value());
  EXPECT_TRUE(rot.analytic_up_to_rotation);
  EXPECT_EQ(rotate(rot.first.tree, *rot.rotation), rot.second.tree);

  auto a = quadratic_field(std::polar(1.0, pi / 3));
  auto b = quadratic_field(std::polar(1.0, pi));
  auto c = classify_pair(a, b);
  EXPECT_FALSE(c.top_equivalent);
  EXPECT_FALSE(c.analytic_equivalent);

  try {
    classify_pair(a, s.field);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeMismatch);
  }
}

TEST(Classify, SameTreeDifferentEta) {
  auto a = quadratic_field(std::polar(1.0, pi / 3));
  auto b = quadratic_field(std::polar(1.2, pi / 3));
  auto c = classify_pair(a, b);
  EXPECT_TRUE(c.top_equivalent);
  EXPECT_FALSE(c.analytic_equivalent);
}
