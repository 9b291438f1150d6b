#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "osculant/curve.hpp"
#include "osculant/projective.hpp"
#include "test_support.hpp"

using namespace osculant;
using osculant::testing::kPi;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(Normalize, ScalesToUnitNorm) {
  EXPECT_TRUE(normalize(vec({0, 2, 0})).coords().isApprox(vec({0, 1, 0})));
  EXPECT_TRUE(normalize(vec({3, 4, 0})).coords().isApprox(vec({0.6, 0.8, 0})));
}

TEST(Normalize, CanonicalizesSign) {
  EXPECT_TRUE(normalize(vec({-1, 0, 0})).coords().isApprox(vec({1, 0, 0})));
  EXPECT_TRUE(normalize(vec({0, -3, 4})).coords().isApprox(vec({0, 0.6, -0.8})));
}

TEST(Normalize, RejectsZeroVector) {
  EXPECT_THROW(normalize(vec({0, 0, 0})), DomainError);
}

TEST(Normalize, IsIdempotent) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd v = osculant::testing::gaussian_vector(rng, 2 + i % 6);
    const ProjPoint once = normalize(v);
    const ProjPoint twice = normalize(once.coords());
    EXPECT_EQ(once.coords(), twice.coords());
  }
}

TEST(Intersect, TwoTangentLinesOfCircleMeetInPoint) {
  const Curve circle = trig_convex(2);
  const Subspace l1 = osculating_subspace(circle, 0.3, 1);
  const Subspace l2 = osculating_subspace(circle, 2.1, 1);
  const Subspace x = intersect({l1, l2});
  ASSERT_EQ(x.dim(), 0);
  EXPECT_LT(l1.distance(x.point()), 1e-12);
  EXPECT_LT(l2.distance(x.point()), 1e-12);
}

TEST(Intersect, IdenticalHyperplanesGiveTheHyperplane) {
  const Curve c = trig_convex(4);
  const Subspace h = osculating_subspace(c, 1.0, 3);
  const Subspace x = intersect({h, h});
  EXPECT_EQ(x.dim(), 3);
  EXPECT_TRUE(x.contains(h));
}

TEST(Intersect, ThreeOsculatingPlanesOfConvexSpaceCurveMeetInPoint) {
  for (const Curve& c : osculant::testing::convex_models(3)) {
    const double p = c.period();
    const Subspace x = intersect({osculating_subspace(c, 0.1 * p, 2), osculating_subspace(c, 0.45 * p, 2),
                                  osculating_subspace(c, 0.8 * p, 2)});
    EXPECT_EQ(x.dim(), 0) << c.label();
  }
}

TEST(Intersect, DisjointSubspacesGiveEmptyMarker) {
  // Two distinct points of P^2.
  const Subspace a = Subspace::span(vec({1, 0, 0}));
  const Subspace b = Subspace::span(vec({0, 1, 0}));
  const Subspace x = intersect({a, b});
  EXPECT_TRUE(x.is_empty());
  EXPECT_EQ(x.dim(), -1);
}

TEST(Intersect, IsOrderIndependent) {
  std::mt19937_64 rng(5);
  const Curve c = trig_convex(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Subspace> subs;
    int budget = 4;
    while (budget > 0) {
      const int k = std::uniform_int_distribution<int>(1, budget)(rng);
      subs.push_back(osculating_subspace(c, osculant::testing::uniform(rng, 0, c.period()), 4 - k));
      budget -= k;
    }
    const Subspace forward = intersect(std::span<const Subspace>(subs));
    std::reverse(subs.begin(), subs.end());
    const Subspace backward = intersect(std::span<const Subspace>(subs));
    ASSERT_EQ(forward.dim(), backward.dim());
    EXPECT_TRUE(forward.contains(backward, 1e-8));
  }
}

TEST(OsculatingSubspace, CircleTangentLine) {
  const Subspace l = osculating_subspace(trig_convex(2), 0.0, 1);
  EXPECT_EQ(l.dim(), 1);
  EXPECT_TRUE(l.contains(vec({1, 1, 0})));
  EXPECT_TRUE(l.contains(vec({0, 0, 1})));
}

TEST(OsculatingSubspace, TwistedCubicOsculatingPlaneAtOrigin) {
  const Subspace plane = osculating_subspace(rational_normal(3), 0.0, 2);
  ASSERT_EQ(plane.dim(), 2);
  const Eigen::MatrixXd ann = plane.annihilator();
  ASSERT_EQ(ann.cols(), 1);
  EXPECT_NEAR(std::abs(ann(3, 0)), 1.0, 1e-12);
}

TEST(OsculatingSubspace, HyperplaneMatchesDualCurve) {
  for (int n = 2; n <= 5; ++n) {
    for (const Curve& c : osculant::testing::convex_models(n)) {
      for (double frac : {0.0, 0.23, 0.61}) {
        const double t = frac * c.period();
        const Subspace h = osculating_subspace(c, t, n - 1);
        const Subspace from_dual = Subspace::hyperplane(osculating_covector(c, t));
        EXPECT_TRUE(h.contains(from_dual, 1e-9) && from_dual.contains(h, 1e-9)) << c.label() << " t=" << t;
      }
    }
  }
}

TEST(OsculatingSubspace, FlagIsNested) {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 6; ++n) {
    for (const Curve& c : osculant::testing::convex_models(n)) {
      for (int trial = 0; trial < 20; ++trial) {
        const double t = osculant::testing::uniform(rng, 0, c.period());
        for (int k = 0; k < n; ++k)
          EXPECT_TRUE(osculating_subspace(c, t, k + 1).contains(osculating_subspace(c, t, k), 1e-9));
      }
    }
  }
}

TEST(OsculatingSubspace, ComplementaryCodimensionsMeetInAPoint) {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 5; ++n) {
    for (const Curve& c : osculant::testing::convex_models(n)) {
      for (int trial = 0; trial < 30; ++trial) {
        std::vector<Subspace> subs;
        int budget = n;
        double t = osculant::testing::uniform(rng, 0, c.period());
        while (budget > 0) {
          const int k = std::uniform_int_distribution<int>(1, budget)(rng);
          subs.push_back(osculating_subspace(c, t, n - k));
          t += osculant::testing::uniform(rng, 0.05, 0.2) * c.period();
          budget -= k;
        }
        EXPECT_EQ(intersect(std::span<const Subspace>(subs)).dim(), 0) << c.label();
      }
    }
  }
}

TEST(OsculatingSubspace, RejectsOutOfRangeOrder) {
  EXPECT_THROW(osculating_subspace(trig_convex(3), 0.0, 4), DomainError);
  EXPECT_THROW(osculating_subspace(trig_convex(3), 0.0, -1), DomainError);
}

TEST(OsculatingSubspace, DegenerateJetRaises) {
  // Straight line in P^2: gamma'' is dependent on gamma, gamma'.
  const Curve line = fourier_curve({{1.0}, {0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}});
  EXPECT_THROW(osculating_subspace(line, 0.4, 2), DegeneracyError);
  (void)kPi;
}
