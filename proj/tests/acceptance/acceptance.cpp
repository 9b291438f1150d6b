// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.

#include <Eigen/Dense>
#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "osculant/osculant.hpp"
#include "../test_support.hpp"

using namespace osculant;
using osculant::testing::gaussian_vector;
using osculant::testing::uniform;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

std::vector<Curve> convex_models_2_to_6() {
  std::vector<Curve> out;
  for (int n = 2; n <= 6; ++n)
    for (const Curve& c : osculant::testing::convex_models(n)) out.push_back(c);
  return out;
}

// Calls `attempt` until it returns without a PrecisionError; counts the redraws.
template <class F>
void with_redraws(F&& attempt, int& redraws, int per_item_cap = 20) {
  for (int k = 0;; ++k) {
    try {
      attempt();
      return;
    } catch (const PrecisionError&) {
      ++redraws;
      if (k + 1 >= per_item_cap) throw;
    }
  }
}

// 1. Census of root-count strata.
Outcome census() {
  Outcome o{true, {}};
  std::vector<std::string> parts;
  for (int n = 2; n <= 5; ++n)
    for (const Curve& c : osculant::testing::convex_models(n)) {
      const auto t0 = std::chrono::steady_clock::now();
      CensusOptions opt;
      opt.seed = 2024;
      const CensusReport r = component_census(c, 5000, opt);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::vector<int> support;
      for (const auto& [roots, count] : r.histogram) support.push_back(roots);
      std::vector<int> expected;
      for (int m = n % 2; m <= n; m += 2) expected.push_back(m);
      const bool ok = support == expected && r.components == n / 2 + 1 && r.locally_constant() && secs <= 120.0;
      o.pass = o.pass && ok;
      std::ostringstream s;
      s << c.label() << " components=" << r.components << " support={";
      for (std::size_t i = 0; i < support.size(); ++i) s << (i ? "," : "") << support[i];
      s << "} " << static_cast<int>(secs) << "s";
      if (!r.locally_constant()) s << " constancy_violations=" << r.constancy_violations;
      parts.push_back(s.str());
    }
  o.detail = join(parts);
  return o;
}

// 2. Root-count recursion through iterated projection.
Outcome recursion() {
  Outcome o{true, {}};
  std::mt19937_64 rng(11);
  int pairs = 0, mismatches = 0, redraws = 0, min_pairs = 1 << 30;
  for (int n = 3; n <= 5; ++n)
    for (const Curve& c : osculant::testing::convex_models(n))
      for (int k = 1; k <= 2; ++k) {
        int here = 0;
        for (int tuple = 0; tuple < 25; ++tuple) {
          std::vector<double> moments;
          for (int i = 0; i < k; ++i) moments.push_back(uniform(rng, 0.0, c.period()));
          // Single-step projections compose down to P^1, which covers n = 3, k = 2.
          Curve cur = c;
          Eigen::MatrixXd embed = Eigen::MatrixXd::Identity(n + 1, n + 1);
          for (double t : moments) {
            const ProjectedCurve step = project_onto_osculating_hyperplane(cur, t);
            embed = embed * step.embedding;
            cur = step.curve;
          }
          for (int j = 0; j < 4; ++j)
            with_redraws(
                [&] {
                  const Eigen::VectorXd x = gaussian_vector(rng, cur.dim() + 1);
                  const int lhs = count_roots(cur, ProjPoint(x)).total + k;
                  const int rhs = count_roots(c, ProjPoint(Eigen::VectorXd(embed * x))).total;
                  if (lhs != rhs) ++mismatches;
                  ++pairs;
                  ++here;
                },
                redraws);
        }
        min_pairs = std::min(min_pairs, here);
      }
  o.pass = mismatches == 0 && min_pairs >= 100 && redraws <= pairs / 20;
  o.detail = "pairs=" + std::to_string(pairs) + " min_per_case=" + std::to_string(min_pairs) +
             " mismatches=" + std::to_string(mismatches) + " redraws=" + std::to_string(redraws);
  return o;
}

// 3. Numerical root count against the exact Sturm count.
Outcome oracle() {
  Outcome o{true, {}};
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 9);
  std::vector<std::string> parts;
  for (int n = 2; n <= 6; ++n) {
    const Curve c = rational_normal(n);
    int mismatches = 0, retries = 0;
    const int points = 200;
    for (int i = 0; i < points; ++i) {
      for (;;) {
        std::vector<mpq_class> q(static_cast<std::size_t>(n + 1));
        Eigen::VectorXd x(n + 1);
        bool zero = true;
        for (int j = 0; j <= n; ++j) {
          q[j] = mpq_class(num(rng), den(rng));
          q[j].canonicalize();
          x[j] = q[j].get_d();
          zero = zero && q[j] == 0;
        }
        if (zero) continue;
        try {
          const int numeric = count_roots(c, ProjPoint(x)).total;
          if (numeric != sturm_count(point_to_form(q), true)) ++mismatches;
          break;
        } catch (const PrecisionError&) {
          ++retries;
        }
      }
    }
    const bool ok = mismatches == 0 && retries * 20 <= points;
    o.pass = o.pass && ok;
    parts.push_back("n=" + std::to_string(n) + " mismatches=" + std::to_string(mismatches) +
                    " retries=" + std::to_string(retries));
  }
  o.detail = join(parts);
  return o;
}

// 4. No sampled point of a convex model exceeds n roots; the control does.
Outcome convexity_bound() {
  Outcome o{true, {}};
  int worst_excess = -1000;
  for (const Curve& c : convex_models_2_to_6()) {
    const ConvexityReport r = check_convex_sampling(c, 10000);
    worst_excess = std::max(worst_excess, r.max_roots_seen - c.dim());
    if (r.verdict != Verdict::pass || r.max_roots_seen > c.dim()) o.pass = false;
  }
  std::vector<std::string> parts{"max(roots-n) over convex models=" + std::to_string(worst_excess)};
  for (const Curve& ctl : {osculant::testing::looped_plane_curve(), osculant::testing::mixed_harmonic_space_curve()}) {
    const ConvexityReport r = check_convex_sampling(ctl, 10000);
    const bool caught = r.verdict == Verdict::fail && r.witness && r.witness->roots > ctl.dim() && r.witness->point &&
                        count_roots(ctl, ProjPoint(*r.witness->point)).total > ctl.dim();
    o.pass = o.pass && caught;
    parts.push_back(ctl.label() + " witness_roots=" + std::to_string(r.witness ? r.witness->roots : -1));
  }
  o.detail = join(parts);
  return o;
}

// 5. Osculating subspaces with codimensions summing to n meet in a point.
Outcome criterion() {
  Outcome o{true, {}};
  int curves = 0;
  for (const Curve& c : convex_models_2_to_6()) {
    // The tenfold-tolerance comparison is part of every sample; a change raises PrecisionError.
    const ConvexityReport r = check_convex_criterion(c, 500);
    if (r.verdict != Verdict::pass) {
      o.pass = false;
      o.detail += c.label() + ": " + r.message + "; ";
    }
    ++curves;
  }
  o.detail += "curves=" + std::to_string(curves) + " tuples_per_curve=500 stable_under_tol_x10";
  return o;
}

// 6. Dual curves of convex models are convex.
Outcome dual_convexity() {
  Outcome o{true, {}};
  int curves = 0;
  for (const Curve& c : convex_models_2_to_6()) {
    const Curve d = dual_curve(c);
    const ConvexityReport a = check_convex_criterion(d, 500);
    const ConvexityReport b = check_convex_sampling(d, 10000);
    if (a.verdict != Verdict::pass || b.verdict != Verdict::pass) {
      o.pass = false;
      o.detail += d.label() + ": " + (a.verdict != Verdict::pass ? a.message : b.message) + "; ";
    }
    ++curves;
  }
  o.detail += "dual curves=" + std::to_string(curves) + " criterion=500 sampling=10000";
  return o;
}

// 7. Leading coefficients of the projected moment curve at tau = 0.
Outcome local_expansion() {
  Outcome o{true, {}};
  double worst = 0.0;
  for (int n = 3; n <= 5; ++n) {
    const ProjectedCurve pc = project_onto_osculating_hyperplane(rational_normal(n), 0.0);
    // Coordinate j of the chart x0 = 1 vanishes to order j at theta = 0, so its leading
    // coefficient is the j-th derivative over j! x0(0); tan theta = theta + O(theta^3) keeps it in t.
    const Eigen::MatrixXd jet = pc.curve.jet(0.0, n).derivs * pc.embedding.transpose();
    double factorial = 1.0;
    for (int j = 1; j < n; ++j) {
      factorial *= j;
      for (int d = 0; d < j; ++d)
        if (std::abs(jet(d, j)) > 1e-12 * std::abs(jet(0, 0))) o.pass = false;
      const double lead = jet(j, j) / factorial / jet(0, 0);
      const double expected = (n - j) / static_cast<double>(n);
      worst = std::max(worst, std::abs(lead - expected) / expected);
    }
    for (int d = 0; d <= n; ++d)
      if (std::abs(jet(d, n)) > 1e-12 * std::abs(jet(0, 0))) o.pass = false;
  }
  o.pass = o.pass && worst <= 1e-6;
  char buf[96];
  std::snprintf(buf, sizeof buf, "n=3,4,5 max relative error=%.3g", worst);
  o.detail = buf;
  return o;
}

// 8. Transport between the two convex models.
Outcome transport_models() {
  Outcome o{true, {}};
  std::mt19937_64 rng(17);
  std::vector<std::string> parts;
  for (int n = 2; n <= 4; ++n) {
    const Curve trig = trig_convex(n), rn = rational_normal(n);
    for (int dir = 0; dir < 2; ++dir) {
      const Curve& c1 = dir == 0 ? trig : rn;
      const Curve& c2 = dir == 0 ? rn : trig;
      int changed = 0, redraws = 0;
      double worst = 0.0;
      for (int i = 0; i < 200; ++i)
        with_redraws(
            [&] {
              const ProjPoint p = random_point(rng, n);
              const ProjPoint q = transport(p, c1, c2);
              const ProjPoint back = transport(q, c2, c1);
              if (count_roots(c1, p).total != count_roots(c2, q).total) ++changed;
              worst = std::max(worst, projective_distance(back, p));
            },
            redraws);
      const bool ok = changed == 0 && worst <= 1e-5 && redraws * 20 <= 200;
      o.pass = o.pass && ok;
      char buf[160];
      std::snprintf(buf, sizeof buf, "n=%d %s changed=%d round_trip=%.2g redraws=%d", n,
                    dir == 0 ? "trig->rn" : "rn->trig", changed, worst, redraws);
      parts.emplace_back(buf);
    }
  }
  o.detail = join(parts);
  return o;
}

// 9. The elliptic hull is convex and centered where expected on the circle.
Outcome hull() {
  Outcome o{true, {}};
  std::mt19937_64 rng(19);
  std::vector<std::string> parts;
  for (int n = 2; n <= 6; n += 2)
    for (const Curve& c : osculant::testing::convex_models(n)) {
      const EllipticHull h = elliptic_hull(c);
      std::vector<Eigen::VectorXd> members;
      int draws = 0;
      while (members.size() < 1000 && draws < 2000000) {
        ++draws;
        const Eigen::VectorXd x = gaussian_vector(rng, n + 1);
        try {
          if (count_roots(c, ProjPoint(x)).total == 0) members.push_back(h.to_chart(x));
        } catch (const PrecisionError&) {
        }
      }
      if (members.size() < 2) {
        o.pass = false;
        parts.push_back(c.label() + " too few members");
        continue;
      }
      std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
      int ok = 0;
      for (int k = 0; k < 500; ++k) {
        const Eigen::VectorXd mid = 0.5 * (members[pick(rng)] + members[pick(rng)]);
        if (elliptic_hull_membership(c, ProjPoint(h.from_chart(mid)))) ++ok;
      }
      o.pass = o.pass && ok == 500;
      parts.push_back(c.label() + " midpoints " + std::to_string(ok) + "/500");
    }
  const Eigen::VectorXd center = hull_center(trig_convex(2)).coords();
  const double err = (center / center[0] - Eigen::Vector3d(1, 0, 0)).norm();
  o.pass = o.pass && err <= 1e-6;
  char buf[80];
  std::snprintf(buf, sizeof buf, "circle center error=%.2g", err);
  parts.emplace_back(buf);
  o.detail = join(parts);
  return o;
}

// 10. Exact factorization of product-generated rational forms.
Outcome factorization() {
  Outcome o{true, {}};
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> small(-6, 6), pos(1, 6);
  int forms = 0, failures = 0;
  for (int d = 2; d <= 6; ++d)
    for (int i = 0; i < 100; ++i) {
      // r real linear factors (repeats allowed) and (d - r) / 2 definite quadratics.
      const int r = d - 2 * std::uniform_int_distribution<int>(0, d / 2)(rng);
      BinaryForm f(0, {mpq_class(pos(rng), pos(rng)) * (small(rng) < 0 ? -1 : 1)});
      std::vector<BinaryForm> linear;
      for (int j = 0; j < r; ++j) {
        if (!linear.empty() && pos(rng) == 1) {
          linear.push_back(linear[std::uniform_int_distribution<std::size_t>(0, linear.size() - 1)(rng)]);
        } else {
          int a = 0, b = 0;
          while (a == 0 && b == 0) {
            a = small(rng);
            b = small(rng);
          }
          linear.emplace_back(1, std::vector<mpq_class>{a, mpq_class(b, pos(rng))});
        }
        f = f * linear.back();
      }
      for (int j = 0; j < (d - r) / 2; ++j) {
        const mpq_class b(small(rng), pos(rng));
        const mpq_class c = b * b / 4 + mpq_class(pos(rng), pos(rng));
        f = f * BinaryForm(2, {1, b, c});
      }
      const BinaryFactorization g = factor_binary_form(f);
      const int sturm = sturm_count(f, true);
      const bool ok = g.real_rooted * g.positive == f && g.real_rooted.n == sturm && sturm == r &&
                      sturm_count(g.real_rooted, true) == g.real_rooted.n && sturm_count(g.positive, true) == 0;
      if (!ok) ++failures;
      ++forms;
    }
  o.pass = failures == 0;
  o.detail = "forms=" + std::to_string(forms) + " failures=" + std::to_string(failures);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "component census", census},
      {2, "root-count recursion", recursion},
      {3, "oracle equivalence", oracle},
      {4, "convexity bound", convexity_bound},
      {5, "criterion agreement", criterion},
      {6, "dual convexity", dual_convexity},
      {7, "local expansion", local_expansion},
      {8, "transport", transport_models},
      {9, "elliptic hull", hull},
      {10, "factorization", factorization},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
