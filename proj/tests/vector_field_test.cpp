#include <gtest/gtest.h>

#include <numbers>
#include <set>
#include <random>

#include "ncfield/ncfield.hpp"
#include "support/random_fields.hpp"

using namespace ncfield;
using std::numbers::pi;

namespace {

bool contains_root(const AntiPolyField& f, Complex z, double tol = 1e-12) {
  for (const auto& r : f.roots())
    if (std::abs(r - z) < tol) return true;
  return false;
}

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2 * pi)); }

}  // namespace

TEST(Field, FromCoefficientsExamples) {
  auto z = AntiPolyField::from_coefficients({0, 1});
  ASSERT_EQ(z.roots().size(), 1u);
  EXPECT_LT(std::abs(z.roots()[0]), 1e-15);
  EXPECT_EQ(z.k(), 0);

  auto q = AntiPolyField::from_coefficients({Complex(0, -1), 0, 1});
  EXPECT_TRUE(contains_root(q, std::polar(1.0, pi / 4)));
  EXPECT_TRUE(contains_root(q, -std::polar(1.0, pi / 4)));

  auto c = AntiPolyField::from_coefficients({0, -1, 0, 1});
  for (double r : {-1.0, 0.0, 1.0}) EXPECT_TRUE(contains_root(c, r));
}

TEST(Field, RejectsBadNormalization) {
  try {
    AntiPolyField::from_coefficients({0, 0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotMonic);
  }
  try {
    AntiPolyField::from_coefficients({1, 1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCentred);
  }
  EXPECT_THROW(AntiPolyField::from_coefficients({1}), Error);
}

TEST(Field, RootResidualAndAntiderivative) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + trial % 10;
    std::vector<Complex> c(d + 1);
    for (int i = 0; i + 1 < d; ++i) c[i] = Complex(g(rng), g(rng));
    c[d] = 1;
    auto f = AntiPolyField::from_coefficients(c);
    double scale = 1;
    for (const auto& a : c) scale = std::max(scale, std::abs(a));
    ASSERT_EQ(static_cast<int>(f.roots().size()), d);
    for (const auto& r : f.roots()) {
      double bound = std::max(1e-12 * scale, 64 * 2.2e-16 * poly::eval_magnitude(c, r));
      EXPECT_LE(std::abs(f.P(r)), bound) << "degree " << d;
    }
    // Q' = P coefficientwise, Q(0) = 0
    const auto& q = f.antiderivative_coefficients();
    EXPECT_EQ(q[0], Complex(0));
    for (int i = 0; i <= d; ++i) EXPECT_LT(std::abs(q[i + 1] * static_cast<double>(i + 1) - c[i]), 1e-15 * (1 + std::abs(c[i])));
  }
}

TEST(Directions, LinearSaddle) {
  auto f = AntiPolyField::from_coefficients({0, 1});
  auto d = separatrix_directions(f, 0);
  EXPECT_NEAR(d[0].angle, 0, 1e-15);
  EXPECT_TRUE(d[0].outgoing);
  EXPECT_NEAR(d[1].angle, pi / 2, 1e-15);
  EXPECT_FALSE(d[1].outgoing);
  EXPECT_NEAR(d[2].angle, pi, 1e-15);
  EXPECT_TRUE(d[2].outgoing);
  EXPECT_NEAR(d[3].angle, 3 * pi / 2, 1e-15);
  EXPECT_FALSE(d[3].outgoing);
}

TEST(Directions, RaysAreInvariantAndSignedByRadialGrowth) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto roots = support::random_centred_roots(2 + trial % 5, rng);
    auto f = AntiPolyField::from_roots(roots);
    for (int r = 0; r < static_cast<int>(f.roots().size()); ++r) {
      Complex lambda = f.dP(f.roots()[r]);
      if (std::abs(lambda) < 1e-3) continue;
      auto d = separatrix_directions(f, r);
      for (int m = 0; m < 4; ++m) {
        EXPECT_NEAR(angle_gap(d[(m + 1) % 4].angle, d[m].angle), pi / 2, 1e-12);
        EXPECT_NE(d[m].outgoing, d[(m + 1) % 4].outgoing);
        // One explicit Euler step of dw/dt = conj(lambda w) from the unit ray point.
        Complex w = std::polar(1.0, d[m].angle);
        Complex v = std::conj(lambda * w);
        double radial = std::norm(w + 1e-6 * v) - std::norm(w);
        double transverse = (std::conj(w) * v).imag();
        EXPECT_NEAR(transverse, 0, 1e-9 * std::abs(lambda));
        EXPECT_EQ(radial > 0, d[m].outgoing);
      }
    }
  }
}

TEST(Directions, DegenerateRoot) {
  auto f = AntiPolyField::from_coefficients({0, 0, 1});
  try {
    separatrix_directions(f, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateRoot);
  }
}

TEST(MarkedPoints, AnglesAndParity) {
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(marked_point_angle(0, j).angle, j * pi / 2, 1e-15);
  auto m = marked_point_angle(2, 1);
  EXPECT_NEAR(m.angle, pi / 4, 1e-15);
  EXPECT_FALSE(m.attracting);
  for (int k = 0; k < 6; ++k)
    for (int j = 0; j + 1 < 2 * k + 4; ++j)
      EXPECT_NE(marked_point_angle(k, j).attracting, marked_point_angle(k, j + 1).attracting);
  EXPECT_THROW(marked_point_angle(1, 6), Error);
  EXPECT_THROW(marked_point_angle(1, -1), Error);
}

TEST(Trace, LinearField) {
  auto f = AntiPolyField::from_coefficients({0, 1});
  auto dirs = separatrix_directions(f, 0);
  for (int s = 0; s < 4; ++s) {
    auto t = trace(f, 0, s);
    ASSERT_TRUE(t.terminal.is_marked());
    EXPECT_EQ(t.terminal.index, s);  // axes: 0, pi/2, pi, 3pi/2
    EXPECT_EQ(t.outgoing, dirs[s].outgoing);
    auto rc = resolve({}, f);
    EXPECT_NEAR(std::abs(t.polyline.front()), rc.launch_radius, 1e-15);
  }
}

TEST(Trace, RealQuadraticConnection) {
  auto f = AntiPolyField::from_coefficients({-1, 0, 1});
  int root_plus = std::abs(f.roots()[0] - 1.0) < 1e-9 ? 0 : 1;
  auto dirs = separatrix_directions(f, root_plus);
  int slot = -1;
  for (int s = 0; s < 4; ++s)
    if (angle_gap(dirs[s].angle, pi) < 1e-9) slot = s;
  ASSERT_GE(slot, 0);
  auto t = trace(f, root_plus, slot);
  ASSERT_TRUE(t.terminal.is_landing());
  EXPECT_EQ(t.terminal.index, 1 - root_plus);
  EXPECT_TRUE(t.outgoing);  // x' = x^2 - 1 < 0 on (-1, 1)
}

TEST(Trace, GenericQuadratic) {
  auto f = AntiPolyField::from_coefficients({Complex(0, -1), 0, 1});
  auto all = trace_all(f);
  ASSERT_EQ(all.size(), 8u);
  std::set<int> marks;
  for (const auto& t : all) {
    ASSERT_TRUE(t.terminal.is_marked());
    EXPECT_EQ(t.terminal.index % 2 == 0, t.outgoing);
    marks.insert(t.terminal.index);
  }
  EXPECT_EQ(marks.size(), 6u);
}

TEST(Genericity, Examples) {
  EXPECT_TRUE(is_generic(AntiPolyField::from_coefficients({Complex(0, -1), 0, 1})).generic());
  auto het = is_generic(AntiPolyField::from_coefficients({-1, 0, 1}));
  EXPECT_EQ(het.verdict, GenericityReport::Verdict::NotGeneric);
  auto dbl = is_generic(AntiPolyField::from_coefficients({0, 0, 1}));
  EXPECT_EQ(dbl.verdict, GenericityReport::Verdict::NotGeneric);
}

TEST(TraceProperties, CountsAndParity) {
  std::mt19937_64 rng(23);
  for (int degree = 2; degree <= 6; ++degree) {
    for (int trial = 0; trial < 6; ++trial) {
      auto s = support::random_generic(degree, rng);
      const int k = degree - 1;
      auto all = trace_all(s.field);
      ASSERT_EQ(static_cast<int>(all.size()), 4 * (k + 1));
      std::vector<int> hits(2 * k + 4, 0);
      int in = 0, out = 0;
      for (const auto& t : all) {
        ASSERT_TRUE(t.terminal.is_marked());
        EXPECT_EQ(t.terminal.index % 2 == 0, t.outgoing);
        ++hits[t.terminal.index];
        (t.outgoing ? out : in)++;
      }
      for (int h : hits) EXPECT_GE(h, 1);
      EXPECT_EQ(in, 2 * (k + 1));
      EXPECT_EQ(out, 2 * (k + 1));
    }
  }
}

TEST(TraceProperties, TimeReversal) {
  // w = mu z with mu^(k+2) = -1 turns dz/dt = -conj(P(z)) into dw/dt = conj(R(w)),
  // R(w) = -conj(mu) P(w / mu), again monic and centred.
  std::mt19937_64 rng(29);
  for (int degree = 2; degree <= 5; ++degree) {
    for (int trial = 0; trial < 4; ++trial) {
      auto s = support::random_generic(degree, rng);
      const int k = degree - 1;
      const Complex mu = std::polar(1.0, pi / (k + 2));
      std::vector<Complex> b;
      for (int i = 0; i <= degree; ++i) b.push_back(-s.field.coefficients()[i] * std::pow(mu, -(i + 1)));
      auto g = AntiPolyField::from_coefficients(b);
      auto before = trace_all(s.field);
      auto after = trace_all(g);
      const int count = 2 * k + 4;
      for (const auto& t : before) {
        Complex w0 = mu * s.field.roots()[t.origin];
        double th = t.launch_angle + pi / (k + 2);
        const TracedSeparatrix* match = nullptr;
        for (const auto& u : after)
          if (std::abs(g.roots()[u.origin] - w0) < 1e-8 && angle_gap(u.launch_angle, th) < 1e-6) match = &u;
        ASSERT_NE(match, nullptr);
        EXPECT_NE(match->outgoing, t.outgoing);
        ASSERT_TRUE(match->terminal.is_marked());
        EXPECT_EQ(match->terminal.index, (t.terminal.index + 1) % count);
      }
    }
  }
}

TEST(TraceProperties, HalvedToleranceKeepsTerminals) {
  std::mt19937_64 rng(31);
  TraceConfig fine;
  fine.step_tolerance = 5e-11;
  for (int degree = 2; degree <= 6; ++degree) {
    for (int trial = 0; trial < 4; ++trial) {
      auto s = support::random_generic(degree, rng);
      auto a = trace_all(s.field);
      auto b = trace_all(s.field, fine);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].terminal.kind, b[i].terminal.kind);
        EXPECT_EQ(a[i].terminal.index, b[i].terminal.index);
      }
    }
  }
}

TEST(TraceConfigTest, ResolveDefaults) {
  auto f = AntiPolyField::from_coefficients({0, -1, 0, 1});
  auto rc = resolve({}, f);
  EXPECT_NEAR(rc.launch_radius, 1e-4 * f.min_root_gap(), 1e-18);
  EXPECT_NEAR(rc.landing_tolerance, 10 * rc.launch_radius, 1e-18);
  EXPECT_GT(rc.escape_radius, 2 * f.max_root_modulus() + 1);
  TraceConfig bad;
  bad.escape_radius = 1.0;
  EXPECT_THROW(resolve(bad, f), Error);
}
