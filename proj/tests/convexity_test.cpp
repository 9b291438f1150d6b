#include <gtest/gtest.h>

#include "osculant/convexity.hpp"
#include "test_support.hpp"

using namespace osculant;

namespace {

// Circle with a strong third harmonic: the curvature changes sign, so some
// points see four tangent lines.
Curve wavy_circle() {
  return fourier_curve({{1.0}, {0.0, 1.0, 0.0, 0.0, 0.0, 0.3, 0.0}, {0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -0.3}},
                       "wavy_circle");
}

}  // namespace

TEST(Sampling, CirclePasses) {
  const auto rep = check_convex_sampling(trig_convex(2), 100);
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_EQ(rep.max_roots_seen, 2);
  EXPECT_EQ(rep.trials, 100);
  EXPECT_FALSE(rep.witness.has_value());
  EXPECT_EQ(rep.message, "no violation found in 100 trials");
}

TEST(Sampling, TrigConvexFourPasses) {
  const auto rep = check_convex_sampling(trig_convex(4), 1000);
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_EQ(rep.max_roots_seen, 4);
}

TEST(Sampling, NonConvexPlaneCurvesFailWithWitness) {
  for (const Curve& c : {wavy_circle(), osculant::testing::looped_plane_curve()}) {
    const auto rep = check_convex_sampling(c, 2000);
    ASSERT_EQ(rep.verdict, Verdict::fail) << c.label();
    ASSERT_TRUE(rep.witness && rep.witness->point);
    EXPECT_GT(rep.witness->roots, 2);
    EXPECT_EQ(count_roots(c, ProjPoint(*rep.witness->point)).total, rep.witness->roots);
  }
}

TEST(Sampling, DeterministicAcrossThreadCounts) {
  SamplingOptions one, four;
  one.threads = 1;
  four.threads = 4;
  one.seed = four.seed = 99;
  const Curve c = osculant::testing::looped_plane_curve();
  const auto a = check_convex_sampling(c, 300, one), b = check_convex_sampling(c, 300, four);
  EXPECT_EQ(nlohmann::json(a).dump(), nlohmann::json(b).dump());
}

TEST(Sampling, DualCurvesPass) {
  for (int n = 2; n <= 5; ++n)
    for (const Curve& c : osculant::testing::convex_models(n)) {
      const auto rep = check_convex_sampling(dual_curve(c), 300);
      EXPECT_EQ(rep.verdict, Verdict::pass) << c.label();
      EXPECT_LE(rep.max_roots_seen, n);
    }
}

TEST(Criterion, TwistedCubicCompositions) {
  const Curve c = rational_normal(3);
  EXPECT_EQ(detail::intersection_dim(c, {0.2, 1.0, 2.5}, {1, 1, 1}, 1e-9), 0);
  EXPECT_EQ(detail::intersection_dim(c, {0.2, 1.0}, {2, 1}, 1e-9), 0);
  EXPECT_EQ(detail::intersection_dim(c, {0.7}, {3}, 1e-9), 0);
  const auto rep = check_convex_criterion(c, 200);
  EXPECT_EQ(rep.verdict, Verdict::pass);
  EXPECT_EQ(rep.message, "no violation found in 200 trials");
}

TEST(Criterion, CircleTangentLinesMeetInPoints) {
  const Curve c = trig_convex(2);
  EXPECT_EQ(detail::intersection_dim(c, {0.0, 2.0}, {1, 1}, 1e-9), 0);
  EXPECT_EQ(detail::intersection_dim(c, {1.0}, {2}, 1e-9), 0);
  EXPECT_EQ(check_convex_criterion(c, 100).verdict, Verdict::pass);
}

TEST(Criterion, ConvexModelsAndDualsPass) {
  for (int n = 2; n <= 5; ++n)
    for (const Curve& c : osculant::testing::convex_models(n)) {
      EXPECT_EQ(check_convex_criterion(c, 100).verdict, Verdict::pass) << c.label();
      EXPECT_EQ(check_convex_criterion(dual_curve(c), 100).verdict, Verdict::pass) << c.label();
    }
}

TEST(Criterion, NonConvexCurvesFail) {
  for (const Curve& c : {osculant::testing::mixed_harmonic_space_curve(), osculant::testing::looped_plane_curve()}) {
    const auto rep = check_convex_criterion(c, 100);
    ASSERT_EQ(rep.verdict, Verdict::fail) << c.label();
    ASSERT_TRUE(rep.witness.has_value());
    ASSERT_EQ(rep.witness->moments.size(), 2u);
    // The witness point lies on both osculating subspaces.
    const int n = c.dim();
    const auto& w = *rep.witness;
    ASSERT_TRUE(w.point.has_value());
    for (int i = 0; i < 2; ++i)
      EXPECT_LE(osculating_subspace(c, w.moments[i], n - w.codims[i]).distance(*w.point), 1e-6) << c.label();
  }
}

TEST(Criterion, ReportJson) {
  const auto rep = check_convex_criterion(trig_convex(3), 10);
  const nlohmann::json j = rep;
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["trials"], 10);
  EXPECT_TRUE(j["witness"].is_null());
}
