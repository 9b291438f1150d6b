#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "osculant/discriminant.hpp"
#include "osculant/stratification.hpp"

using namespace osculant;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Discriminant, CircleIsItsOwnDiscriminant) {
  const Curve c = trig_convex(2);
  const RuledSample s = sample_discriminant(c, 64, 8);
  ASSERT_EQ(s.points.size(), 64u);
  for (const auto& p : s.points) {
    EXPECT_EQ(p.ruling.size(), 0);
    EXPECT_LE(projective_distance(p.x, c.point(p.t)), 1e-12);
  }
}

TEST(Discriminant, TangentDevelopableOfTwistedCubicHasDoubleRoots) {
  const Curve c = rational_normal(3);
  const RuledSample s = sample_discriminant(c, 40, 10);
  EXPECT_EQ(count_discriminant_violations(c, s), 0);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, s.points.size() - 1);
  for (int k = 0; k < 100; ++k) {
    const RuledPoint& p = s.points[pick(rng)];
    // Every point of a tangent line has a tangency of order >= 2 at its generating moment.
    try {
      const RootCount rc = count_roots(c, ProjPoint(p.x));
      bool found = false;
      for (const auto& t : rc.tangencies)
        if (detail::periodic_gap(t.tau, p.t, c.period()) < 1e-5 && t.order >= 2) found = true;
      EXPECT_TRUE(found) << "t=" << p.t;
    } catch (const PrecisionError&) {
      // A numerically unresolved cluster is the expected on-discriminant signal.
    }
  }
}

TEST(Discriminant, MembershipHoldsForHigherDimensions) {
  for (int n : {3, 4, 5}) {
    const Curve c = trig_convex(n);
    const RuledSample s = sample_discriminant(c, 16, 4);
    EXPECT_EQ(s.points.size(), static_cast<std::size_t>(16 * s.points_per_ruling()));
    EXPECT_EQ(count_discriminant_violations(c, s), 0) << "n=" << n;
    for (const auto& p : s.points) EXPECT_LE(osculating_subspace(c, p.t, n - 2).distance(p.x), 1e-9);
  }
}

TEST(Discriminant, SampledPointsAreOnTheDiscriminantForStratumLabels) {
  const Curve c = trig_convex(4);
  const RuledSample s = sample_discriminant(c, 12, 3);
  for (const auto& p : s.points) {
    try {
      const RootCount rc = count_roots(c, ProjPoint(p.x));
      bool merged = false;
      for (const auto& t : rc.tangencies) merged = merged || t.order >= 2;
      EXPECT_TRUE(merged);
    } catch (const PrecisionError&) {
    }
  }
}

TEST(Discriminant, ObjCounts) {
  const RuledSample s = sample_discriminant(rational_normal(3), 256, 64);
  std::ostringstream os;
  write_obj(s, os);
  int v = 0, f = 0;
  for (const auto& line : lines_of(os.str())) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("f ", 0) == 0) ++f;
  }
  EXPECT_EQ(v, 256 * 64);
  EXPECT_EQ(f, 255 * 63);
}

TEST(Discriminant, ObjNeedsDimensionThree) {
  const RuledSample s = sample_discriminant(trig_convex(4), 8, 3);
  std::ostringstream os;
  EXPECT_THROW(write_obj(s, os), UnsupportedFormat);
  EXPECT_THROW(export_format_from_string("ply"), UnsupportedFormat);
}

TEST(Discriminant, CsvHeaderAndRows) {
  const RuledSample s = sample_discriminant(trig_convex(4), 8, 3);
  std::ostringstream os;
  write_csv(s, os);
  const auto lines = lines_of(os.str());
  EXPECT_EQ(lines.front(), "t,s1,s2,x0,x1,x2,x3,x4");
  EXPECT_EQ(lines.size(), 1 + s.points.size());
}

TEST(Discriminant, JsonMirrorsCsv) {
  const RuledSample s = sample_discriminant(rational_normal(3), 8, 3);
  const nlohmann::json j = sample_to_json(s);
  EXPECT_EQ(j.at("columns").size(), 6u);
  EXPECT_EQ(j.at("points").size(), s.points.size());
  EXPECT_EQ(j.at("points")[0].size(), 6u);
}

TEST(Discriminant, DeterministicOutput) {
  for (auto f : {ExportFormat::obj, ExportFormat::csv, ExportFormat::json}) {
    std::ostringstream a, b;
    export_sample(sample_discriminant(rational_normal(3), 32, 8), f, a);
    export_sample(sample_discriminant(rational_normal(3), 32, 8), f, b);
    EXPECT_EQ(a.str(), b.str());
  }
}
