#pragma once

// Convexity checks: the root-count bound #_p <= n on random points, and the
// osculating-intersection criterion on random moment tuples plus a scan of
// moment pairs for transversality failures.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "osculant/curve.hpp"
#include "osculant/errors.hpp"
#include "osculant/parallel.hpp"
#include "osculant/sampling.hpp"
#include "osculant/tangency.hpp"

namespace osculant {

enum class Verdict { pass, fail };

inline std::string to_string(Verdict v) { return v == Verdict::pass ? "pass" : "fail"; }

/// Evidence of non-convexity. `point` has more than n roots when `roots` is
/// set; `moments`/`codims` describe an osculating configuration that is not
/// in general position.
struct ConvexityWitness {
  std::optional<Eigen::VectorXd> point;
  int roots = -1;
  std::vector<double> moments;
  std::vector<int> codims;
};

struct ConvexityReport {
  Verdict verdict = Verdict::pass;
  int max_roots_seen = 0;
  std::optional<ConvexityWitness> witness;
  int trials = 0;
  int retries = 0;
  std::string message;
};

inline void to_json(nlohmann::json& j, const ConvexityWitness& w) {
  j = nlohmann::json::object();
  if (w.point) j["point"] = std::vector<double>(w.point->data(), w.point->data() + w.point->size());
  if (w.roots >= 0) j["roots"] = w.roots;
  if (!w.moments.empty()) {
    j["moments"] = w.moments;
    j["codims"] = w.codims;
  }
}

inline void to_json(nlohmann::json& j, const ConvexityReport& r) {
  j = nlohmann::json{{"verdict", to_string(r.verdict)},
                     {"max_roots_seen", r.max_roots_seen},
                     {"trials", r.trials},
                     {"retries", r.retries},
                     {"message", r.message}};
  j["witness"] = r.witness ? nlohmann::json(*r.witness) : nlohmann::json(nullptr);
}

struct SamplingOptions {
  std::uint64_t seed = 1;
  int threads = thread_count();
  /// Redraws allowed for a single trial before the precision error propagates.
  int redraws_per_trial = 20;
  Tolerances tol{};
};

/// Counts roots at `trials` random points; fails with a witness when some
/// point has more than n roots.
inline ConvexityReport check_convex_sampling(const Curve& c, int trials, const SamplingOptions& opt = {}) {
  if (trials < 1) throw DomainError("check_convex_sampling: trials must be positive");
  c.require_generic();
  const int n = c.dim();
  struct Outcome {
    Eigen::VectorXd point;
    int roots = 0;
    int retries = 0;
  };
  std::vector<Outcome> out(static_cast<std::size_t>(trials));
  parallel_for(
      trials,
      [&](int i) {
        auto rng = item_rng(opt.seed, static_cast<std::uint64_t>(i));
        for (int attempt = 0;; ++attempt) {
          const ProjPoint p = random_point(rng, n);
          try {
            out[i] = {p.coords(), count_roots(c, p, opt.tol).total, attempt};
            return;
          } catch (const PrecisionError&) {
            if (attempt + 1 >= opt.redraws_per_trial) throw;
          }
        }
      },
      opt.threads);

  ConvexityReport rep;
  rep.trials = trials;
  for (const auto& o : out) {
    rep.retries += o.retries;
    if (o.roots > rep.max_roots_seen) {
      rep.max_roots_seen = o.roots;
      if (o.roots > n) rep.witness = ConvexityWitness{o.point, o.roots, {}, {}};
    }
  }
  const int cap = std::max(10, trials / 20);
  if (rep.retries > cap)
    throw PrecisionError("check_convex_sampling: " + std::to_string(rep.retries) +
                         " precision retries exceed the cap of " + std::to_string(cap));
  if (rep.witness) {
    rep.verdict = Verdict::fail;
    rep.message = "point with " + std::to_string(rep.max_roots_seen) + " roots exceeds n = " + std::to_string(n);
  } else {
    rep.message = "no violation found in " + std::to_string(trials) + " trials";
  }
  return rep;
}

struct CriterionOptions {
  std::uint64_t seed = 1;
  int threads = thread_count();
  /// Moments of a tuple stay at least this fraction of the period apart.
  double min_separation = 1e-3;
  /// Grid per period for the pair scan; 0 disables the scan.
  int pair_grid = 256;
  Tolerances tol{};
};

namespace detail {

// Uniform random composition of n: each of the n-1 gaps is a cut with probability 1/2.
inline std::vector<int> random_composition(std::mt19937_64& rng, int n) {
  std::vector<int> parts{1};
  std::bernoulli_distribution cut(0.5);
  for (int k = 1; k < n; ++k) {
    if (cut(rng)) parts.push_back(1);
    else ++parts.back();
  }
  return parts;
}

inline std::vector<double> separated_moments(std::mt19937_64& rng, int r, double period, double sep) {
  std::uniform_real_distribution<double> u(0.0, period);
  for (;;) {
    std::vector<double> t(static_cast<std::size_t>(r));
    for (auto& x : t) x = u(rng);
    bool ok = true;
    for (int a = 0; a < r && ok; ++a)
      for (int b = a + 1; b < r && ok; ++b) ok = periodic_gap(t[a], t[b], period) >= sep * period;
    if (ok) return t;
  }
}

inline int intersection_dim(const Curve& c, const std::vector<double>& t, const std::vector<int>& k, double rank_tol) {
  return osculating_intersection(c, t, k, rank_tol).dim();
}

// Stacked dual jets: rows 0..k1-1 at t1, rows 0..k2-1 at t2 (k1 + k2 = n + 1).
inline Eigen::MatrixXd dual_stack(const TrigVector& dual, double t1, int k1, double t2, int k2) {
  const int n1 = dual.rows();
  Eigen::MatrixXd m(k1 + k2, n1);
  m.topRows(k1) = dual.jet(t1, k1 - 1);
  m.bottomRows(k2) = dual.jet(t2, k2 - 1);
  for (Eigen::Index r = 0; r < m.rows(); ++r) m.row(r).normalize();
  return m;
}

struct PairViolation {
  double t1, t2;
  int k1, k2;
  Eigen::VectorXd point;
};

// Sign changes of det(dual_stack) over pairs t1 != t2 locate points lying in
// L^{n-k1}_{t1} and L^{n-k2}_{t2} at once, hence with at least n+1 roots.
inline std::optional<PairViolation> scan_pairs(const Curve& c, int grid) {
  const int n = c.dim();
  const TrigVector& dual = c.dual();
  const double period = c.period();
  const double sigma = dual.parity() == 1 ? -1.0 : 1.0;
  std::vector<Eigen::MatrixXd> jets(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    jets[i] = dual.jet(period * i / grid, n);
    for (Eigen::Index r = 0; r < jets[i].rows(); ++r) jets[i].row(r).normalize();
  }
  const double noise = 1e-10;
  for (int k1 = 1; k1 <= n; ++k1) {
    const int k2 = n + 1 - k1;
    const double wrap_sign = std::pow(sigma, k2);
    auto det_at = [&](int i, int j) {
      Eigen::MatrixXd m(n + 1, n + 1);
      m.topRows(k1) = jets[i].topRows(k1);
      const int idx = (i + j) % grid;
      m.bottomRows(k2) = jets[idx].topRows(k2) * (i + j >= grid ? wrap_sign : 1.0);
      return m.partialPivLu().determinant();
    };
    std::vector<std::vector<int>> sign(static_cast<std::size_t>(grid), std::vector<int>(static_cast<std::size_t>(grid), 0));
    for (int i = 0; i < grid; ++i)
      for (int j = 1; j < grid; ++j) {
        const double d = det_at(i, j);
        if (std::abs(d) > noise) sign[i][j] = d > 0 ? 1 : -1;
      }
    // Consecutive determined samples of opposite sign, along s or along t1;
    // samples at the noise level in between are skipped.
    for (int i = 0; i < grid; ++i)
      for (int j = 1; j < grid; ++j) {
        if (sign[i][j] == 0) continue;
        int di = 0, dj = 0;
        int jn = j + 1;
        while (jn < grid && sign[i][jn] == 0) ++jn;
        int in = i + 1;
        while (in < grid && sign[in][j] == 0) ++in;
        if (jn < grid && sign[i][jn] == -sign[i][j]) dj = jn - j;
        else if (in < grid && sign[in][j] == -sign[i][j]) di = in - i;
        else continue;
        const double t1a = period * i / grid, t2a = period * (i + j) / grid;
        const double t1b = period * (i + di) / grid, t2b = period * (i + di + j + dj) / grid;
        auto value = [&](double u) {
          return dual_stack(dual, t1a + u * (t1b - t1a), k1, t2a + u * (t2b - t2a), k2).partialPivLu().determinant();
        };
        double lo = 0.0, hi = 1.0;
        const bool lo_sign = std::signbit(value(lo));
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (std::signbit(value(mid)) == lo_sign) lo = mid;
          else hi = mid;
        }
        const double u = 0.5 * (lo + hi);
        const double t1 = t1a + u * (t1b - t1a), t2 = t2a + u * (t2b - t2a);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(dual_stack(dual, t1, k1, t2, k2), Eigen::ComputeFullV);
        return PairViolation{c.wrap(t1), c.wrap(t2), k1, k2, svd.matrixV().col(n)};
      }
  }
  return std::nullopt;
}

}  // namespace detail

/// Checks that osculating subspaces of codimensions k_1, ..., k_r (sum n) at
/// pairwise distinct moments meet in a single point, for `samples` random
/// compositions and moment tuples, then scans moment pairs for configurations
/// that are not in general position.
inline ConvexityReport check_convex_criterion(const Curve& c, int samples, const CriterionOptions& opt = {}) {
  if (samples < 1) throw DomainError("check_convex_criterion: samples must be positive");
  c.require_nondegenerate();
  const int n = c.dim();
  struct Outcome {
    std::vector<double> t;
    std::vector<int> k;
    int dim = 0;
  };
  std::vector<Outcome> out(static_cast<std::size_t>(samples));
  parallel_for(
      samples,
      [&](int i) {
        auto rng = item_rng(opt.seed, static_cast<std::uint64_t>(i));
        Outcome o;
        o.k = detail::random_composition(rng, n);
        o.t = detail::separated_moments(rng, static_cast<int>(o.k.size()), c.period(), opt.min_separation);
        o.dim = detail::intersection_dim(c, o.t, o.k, opt.tol.rank);
        const int loose = detail::intersection_dim(c, o.t, o.k, 10.0 * opt.tol.rank);
        if (loose != o.dim)
          throw PrecisionError("check_convex_criterion: intersection dimension " + std::to_string(o.dim) +
                               " changes to " + std::to_string(loose) + " when the rank tolerance grows tenfold");
        out[i] = std::move(o);
      },
      opt.threads);

  ConvexityReport rep;
  rep.trials = samples;
  rep.max_roots_seen = -1;
  for (const auto& o : out) {
    if (o.dim == 0) continue;
    rep.verdict = Verdict::fail;
    rep.witness = ConvexityWitness{std::nullopt, -1, o.t, o.k};
    rep.message = "osculating subspaces meet in dimension " + std::to_string(o.dim) + " instead of a point";
    return rep;
  }
  if (opt.pair_grid > 0) {
    if (auto v = detail::scan_pairs(c, opt.pair_grid)) {
      rep.verdict = Verdict::fail;
      ConvexityWitness w{v->point, -1, {v->t1, v->t2}, {v->k1, v->k2}};
      try {
        w.roots = count_roots(c, ProjPoint(v->point), opt.tol).total;
        rep.max_roots_seen = w.roots;
      } catch (const Error&) {
      }
      rep.witness = std::move(w);
      rep.message = "osculating subspaces of codimensions " + std::to_string(v->k1) + " and " +
                    std::to_string(v->k2) + " meet; a point on both has at least " + std::to_string(n + 1) + " roots";
      return rep;
    }
  }
  rep.message = "no violation found in " + std::to_string(samples) + " trials";
  return rep;
}

}  // namespace osculant
