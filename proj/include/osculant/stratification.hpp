#pragma once

// Root filtration of P^n by the number of tangent osculating hyperplanes,
// elliptic hulls, fiber coordinates of the strata, the transport map between
// two convex curves and the census of root counts off the discriminant.
//
// Stratum i collects the points with #_p = n - 2i. Such a point lies in the
// intersection A of the osculating subspaces at its moments (codimensions given
// by the orders), a 2i-dimensional subspace, and there it belongs to the
// elliptic hull of the curve projected along those moments. The fiber
// coordinate is the radial position inside that convex hull about its
// analytic center; directions are expressed in the affine frame spanned by
// curve points at fixed phases, which makes them comparable between curves.

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "osculant/binary_form.hpp"
#include "osculant/curve.hpp"
#include "osculant/errors.hpp"
#include "osculant/parallel.hpp"
#include "osculant/projection.hpp"
#include "osculant/projective.hpp"
#include "osculant/sampling.hpp"
#include "osculant/simplex.hpp"
#include "osculant/tangency.hpp"
#include "osculant/trig_series.hpp"

namespace osculant {

/// Stratum index i = (n - #_p) / 2. Throws OnDiscriminant when the parity is off.
inline int stratum_label(const Curve& c, const ProjPoint& p, const Tolerances& tol = {}) {
  const int n = c.dim();
  const int total = count_roots(c, p, tol).total;
  if (total > n) throw GeometryError("stratum_label: " + std::to_string(total) + " roots exceed n = " + std::to_string(n) + " (non-convex curve)");
  if ((n - total) % 2 != 0)
    throw OnDiscriminant("stratum_label: root total " + std::to_string(total) + " has the wrong parity for n = " +
                         std::to_string(n) + "; the point is numerically on the discriminant");
  return (n - total) / 2;
}

/// Elliptic hull of a convex curve in even dimension N, seen in the affine chart
/// {<ell, x> = 1}. Chart coordinates are y = frame^T x / <ell, x>.
struct EllipticHull {
  Curve curve;
  Eigen::VectorXd ell;
  Eigen::MatrixXd frame;
  /// Sampled hyperplanes gamma*(tau_k) (rows), oriented so the hull is on the positive side.
  Eigen::MatrixXd half_spaces;
  /// Chebyshev center of the sampled half-spaces and its inradius.
  Eigen::VectorXd center_chart;
  double inradius = 0.0;
  /// Analytic center of the sampled half-spaces; unique and smooth in the curve,
  /// so it anchors the radial fiber coordinates.
  Eigen::VectorXd anchor_chart;

  [[nodiscard]] Eigen::VectorXd to_chart(const Eigen::VectorXd& x) const {
    const double s = ell.dot(x);
    if (std::abs(s) <= 1e-14 * x.norm()) throw GeometryError("EllipticHull: point lies at infinity of the chart");
    return frame.transpose() * x / s;
  }

  [[nodiscard]] Eigen::VectorXd from_chart(const Eigen::VectorXd& y) const { return ell + frame * y; }

  [[nodiscard]] ProjPoint center() const { return ProjPoint(from_chart(center_chart)); }
  [[nodiscard]] ProjPoint anchor() const { return ProjPoint(from_chart(anchor_chart)); }

  /// Distance from chart point y to the hull boundary along unit direction u.
  [[nodiscard]] double boundary_distance(const Eigen::VectorXd& y, const Eigen::VectorXd& u) const {
    // Along x(s) = x + s v the form <gamma*(tau), x(s)> = b(tau) - s a(tau) first vanishes at min b/a over a > 0.
    const Eigen::VectorXd x = from_chart(y), v = frame * u;
    const TrigSeries b = dot(x, curve.dual());
    const TrigSeries a = dot(Eigen::VectorXd(-v), curve.dual());
    const Eigen::MatrixXd& table = curve.default_dual_table();
    const Eigen::VectorXd bs = table * x, as = -(table * v);
    const double a_scale = as.cwiseAbs().maxCoeff();
    const int grid = static_cast<int>(table.rows());
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k)
      if (as[k] > 1e-12 * a_scale && bs[k] / as[k] < best_ratio) {
        best_ratio = bs[k] / as[k];
        best = k;
      }
    if (best < 0) throw GeometryError("EllipticHull: unbounded ray; the chart does not contain the hull");
    const double h = curve.period() / grid;
    const double t0 = curve.period() * best / grid;
    auto ratio = [&](double t) {
      const double av = a(t);
      return av > 0.0 ? b(t) / av : std::numeric_limits<double>::infinity();
    };
    const auto r = boost::math::tools::brent_find_minima(ratio, t0 - h, t0 + h, 52);
    return std::min(best_ratio, r.second);
  }
};

namespace detail {

inline Eigen::MatrixXd orthonormal_complement(const Eigen::VectorXd& unit) {
  return Subspace::hyperplane(unit).basis();
}

// Minimizer of -sum log(b - A y) by damped Newton steps from a strictly feasible y.
inline Eigen::VectorXd analytic_center(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd y) {
  auto barrier = [&](const Eigen::VectorXd& z) {
    const Eigen::VectorXd s = b - a * z;
    if (s.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
    return -s.array().log().sum();
  };
  for (int iter = 0; iter < 100; ++iter) {
    const Eigen::VectorXd inv = (b - a * y).cwiseInverse();
    const Eigen::VectorXd grad = a.transpose() * inv;
    const Eigen::MatrixXd hess = a.transpose() * inv.cwiseAbs2().asDiagonal() * a;
    const Eigen::VectorXd step = -hess.ldlt().solve(grad);
    const double decrement = -grad.dot(step);
    if (decrement < 1e-20) return y;
    if (decrement < 0.1) {
      // Quadratic convergence region: full steps stay feasible.
      y += step;
      if (decrement < 1e-12) return y;
      continue;
    }
    double t = 1.0;
    const double f0 = barrier(y);
    while (barrier(y + t * step) > f0 - 0.25 * t * decrement) {
      t *= 0.5;
      if (t < 1e-12) throw PrecisionError("analytic_center: line search failed");
    }
    y += t * step;
  }
  throw PrecisionError("analytic_center: Newton iteration did not converge");
}

}  // namespace detail

/// Membership in Ell: #_p = 0 for even n, #_p = 1 for odd n. For even n the
/// answer is cross-checked against the sampled half-spaces H_tau.
inline bool elliptic_hull_membership(const Curve& c, const ProjPoint& p, const Tolerances& tol = {}) {
  const int n = c.dim();
  const int total = count_roots(c, p, tol).total;
  if (n % 2 == 1) return total == 1;
  const Eigen::VectorXd vals = c.default_dual_table() * p.coords();
  const double peak = vals.cwiseAbs().maxCoeff();
  const bool one_side = vals.minCoeff() > 0.0 || vals.maxCoeff() < 0.0;
  if (total == 0 && !one_side)
    throw PrecisionError("elliptic_hull_membership: no roots found but the sampled hyperplanes separate the point");
  if (total > 0 && one_side && vals.cwiseAbs().minCoeff() > 1e-3 * peak)
    throw PrecisionError("elliptic_hull_membership: roots found but every sampled hyperplane keeps the point on one side");
  return total == 0;
}

/// Elliptic hull of a convex curve of even dimension with its Chebyshev center,
/// computed by linear programming over tau_grid sampled half-spaces.
inline EllipticHull elliptic_hull(const Curve& c, int tau_grid = 256) {
  const int n = c.dim();
  if (n % 2 != 0)
    throw DomainError("elliptic_hull: odd dimension " + std::to_string(n) + "; the hull is fibered, not convex");
  if (tau_grid < n + 2) throw DomainError("elliptic_hull: tau_grid must exceed n + 1");
  c.require_generic();
  const Eigen::MatrixXd table = c.dual_table(tau_grid);
  Eigen::VectorXd ell = table.colwise().mean().transpose();
  if (ell.norm() <= 1e-9 * table.rowwise().norm().maxCoeff())
    throw GeometryError("elliptic_hull: hyperplanes average to zero; no affine chart contains the hull");
  ell.normalize();
  // Each sampled hyperplane must keep the whole curve on one side.
  for (int k = 0; k < tau_grid; ++k) {
    const Eigen::VectorXd vals = c.default_dual_table() * c.point(c.period() * k / tau_grid);
    if (vals.minCoeff() < -1e-9 * vals.cwiseAbs().maxCoeff() && vals.maxCoeff() > 1e-9 * vals.cwiseAbs().maxCoeff())
      throw GeometryError("elliptic_hull: the curve crosses an osculating hyperplane (non-convex curve)");
  }

  EllipticHull hull{c, ell, detail::orthonormal_complement(ell), table, Eigen::VectorXd::Zero(n), 0.0,
                    Eigen::VectorXd::Zero(n)};
  // Variables (y, r): maximize r with <xi_k, ell + V y> >= r |V^T xi_k|.
  Eigen::MatrixXd a(tau_grid, n + 1);
  Eigen::VectorXd b(tau_grid), obj = Eigen::VectorXd::Zero(n + 1);
  for (int k = 0; k < tau_grid; ++k) {
    const Eigen::VectorXd xi = table.row(k).transpose();
    const Eigen::VectorXd proj = hull.frame.transpose() * xi;
    a.block(k, 0, 1, n) = -proj.transpose();
    a(k, n) = proj.norm();
    b[k] = xi.dot(ell);
  }
  obj[n] = 1.0;
  const LpResult lp = solve_lp_free(a, b, obj);
  if (lp.status == LpStatus::infeasible)
    throw GeometryError("elliptic_hull: half-space LP is infeasible (non-convex curve or chart failure)");
  if (lp.status == LpStatus::unbounded)
    throw GeometryError("elliptic_hull: half-space LP is unbounded (hull leaves the chart)");
  if (!(lp.x[n] > 1e-9))
    throw GeometryError("elliptic_hull: sampled half-spaces have empty interior (non-convex curve)");
  hull.center_chart = lp.x.head(n);
  hull.inradius = lp.x[n];
  hull.anchor_chart = detail::analytic_center(a.leftCols(n), b, hull.center_chart);
  if (!elliptic_hull_membership(c, hull.center()) || !elliptic_hull_membership(c, hull.anchor()))
    throw GeometryError("elliptic_hull: center of the sampled half-spaces is not in the hull (non-convex curve)");
  return hull;
}

/// Chebyshev center of the elliptic hull.
inline ProjPoint hull_center(const Curve& c, int tau_grid = 256) { return elliptic_hull(c, tau_grid).center(); }

/// Position inside the elliptic hull: radial fraction in [0, 1) toward the
/// boundary and the direction in affine-frame coordinates (zero at the center).
struct FiberPoint {
  Eigen::VectorXd direction;
  double radius = 0.0;
};

struct StratumData {
  int n = 0;
  int index = 0;
  double period = 0.0;
  std::vector<Tangency> moments;
  FiberPoint fiber;

  /// Moments repeated by order, in parameter units of the curve.
  [[nodiscard]] std::vector<double> expanded_moments() const {
    std::vector<double> out;
    for (const auto& m : moments)
      for (int k = 0; k < m.order; ++k) out.push_back(m.tau);
    return out;
  }
};

inline void to_json(nlohmann::json& j, const StratumData& d) {
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : d.moments) ms.push_back({{"tau", m.tau}, {"order", m.order}});
  std::vector<double> dir(d.fiber.direction.data(), d.fiber.direction.data() + d.fiber.direction.size());
  j = nlohmann::json{{"n", d.n},
                     {"index", d.index},
                     {"period", d.period},
                     {"moments", ms},
                     {"fiber", {{"radius", d.fiber.radius}, {"direction", dir}}}};
}

namespace detail {

// Chart coordinates of curve points at the phases j / (N + 1), j = 0..N.
inline Eigen::MatrixXd frame_points(const EllipticHull& hull) {
  const int dim = hull.curve.dim();
  Eigen::MatrixXd pts(dim, dim + 1);
  for (int j = 0; j <= dim; ++j) pts.col(j) = hull.to_chart(hull.curve.point(hull.curve.period() * j / (dim + 1)));
  return pts;
}

inline Eigen::MatrixXd frame_edges(const EllipticHull& hull) {
  const Eigen::MatrixXd pts = frame_points(hull);
  return pts.rightCols(pts.cols() - 1).colwise() - pts.col(0);
}

struct StratumFrame {
  ProjectedCurve projected;
  EllipticHull hull;
};

inline StratumFrame stratum_frame(const Curve& c, const std::vector<double>& expanded, int tau_grid) {
  ProjectedCurve pc = project_iterated(c, expanded);
  EllipticHull hull = elliptic_hull(pc.curve, tau_grid);
  return {std::move(pc), std::move(hull)};
}

}  // namespace detail

struct StratumOptions {
  int tau_grid = 256;
  /// Maximum distance of p from the ambient of its moments.
  double ambient_tol = 1e-6;
  Tolerances tol{};
};

/// Stratum index, tangency moments and fiber coordinate of p.
inline StratumData tangency_data(const Curve& c, const ProjPoint& p, const StratumOptions& opt = {}) {
  const int n = c.dim();
  if (p.dim() != n) throw DomainError("tangency_data: point has the wrong dimension");
  const RootCount rc = count_roots(c, p, opt.tol);
  if (rc.total > n) throw GeometryError("tangency_data: more than n roots (non-convex curve)");
  if ((n - rc.total) % 2 != 0)
    throw OnDiscriminant("tangency_data: root total " + std::to_string(rc.total) + " has the wrong parity for n = " +
                         std::to_string(n));
  StratumData out;
  out.n = n;
  out.index = (n - rc.total) / 2;
  out.period = c.period();
  out.moments = rc.tangencies;
  if (out.index == 0) return out;

  const auto frame = detail::stratum_frame(c, out.expanded_moments(), opt.tau_grid);
  const Eigen::VectorXd base = p.coords();
  const Eigen::VectorXd x = frame.projected.to_internal(base);
  const double off = (base - frame.projected.to_base(x)).norm() / base.norm();
  if (off > opt.ambient_tol)
    throw PrecisionError("tangency_data: point is " + std::to_string(off) +
                         " away from the intersection of its osculating subspaces");
  const EllipticHull& hull = frame.hull;
  const Eigen::VectorXd d = hull.to_chart(x) - hull.anchor_chart;
  const double r = d.norm();
  out.fiber.direction = Eigen::VectorXd::Zero(2 * out.index);
  if (r <= 1e-14) return out;
  const Eigen::VectorXd u = d / r;
  const double reach = hull.boundary_distance(hull.anchor_chart, u);
  out.fiber.radius = r / reach;
  if (out.fiber.radius >= 1.0 + 1e-6)
    throw PrecisionError("tangency_data: point lies outside the elliptic hull of its projected curve");
  out.fiber.radius = std::min(out.fiber.radius, 1.0);
  out.fiber.direction = detail::frame_edges(hull).partialPivLu().solve(u).normalized();
  return out;
}

/// Point of P^n with the given stratum data relative to c. Moments are read
/// as phases of data.period and placed at the same phases of c.
inline ProjPoint reconstruct(const Curve& c, const StratumData& data, const StratumOptions& opt = {}) {
  const int n = c.dim();
  if (data.n != n) throw DomainError("reconstruct: stratum data belongs to another dimension");
  StratumData local = data;
  for (auto& m : local.moments) m.tau = c.wrap(m.tau / data.period * c.period());
  local.period = c.period();
  if (local.index == 0) {
    std::vector<double> taus;
    std::vector<int> orders;
    for (const auto& m : local.moments) {
      taus.push_back(m.tau);
      orders.push_back(m.order);
    }
    const Subspace pt = osculating_intersection(c, taus, orders, opt.tol.rank);
    if (pt.dim() != 0) throw GeometryError("reconstruct: osculating subspaces do not meet in a point (non-convex curve)");
    return ProjPoint(pt.point());
  }
  const auto frame = detail::stratum_frame(c, local.expanded_moments(), opt.tau_grid);
  const EllipticHull& hull = frame.hull;
  Eigen::VectorXd y = hull.anchor_chart;
  if (data.fiber.radius > 0.0) {
    const Eigen::VectorXd u = (detail::frame_edges(hull) * data.fiber.direction).normalized();
    y += data.fiber.radius * hull.boundary_distance(hull.anchor_chart, u) * u;
  }
  return ProjPoint(frame.projected.to_base(hull.from_chart(y)));
}

/// Stratum-preserving map P^n -> P^n carrying the root data of c1 to c2.
inline ProjPoint transport(const ProjPoint& p, const Curve& c1, const Curve& c2, const StratumOptions& opt = {}) {
  if (c1.dim() != c2.dim()) throw DomainError("transport: curves live in different dimensions");
  return reconstruct(c2, tangency_data(c1, p, opt), opt);
}

struct CensusOptions {
  std::uint64_t seed = 1;
  int threads = thread_count();
  int constancy_points = 100;
  double perturbation = 1e-5;
  int redraws = 20;
  Tolerances tol{};
};

struct CensusReport {
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::map<int, int> histogram;
  int components = 0;
  /// Draws rejected as numerically on the discriminant (replaced by redraws).
  int discarded = 0;
  int constancy_checked = 0;
  int constancy_violations = 0;

  /// Support equals {n, n-2, ..., n mod 2}.
  [[nodiscard]] bool support_complete() const {
    if (static_cast<int>(histogram.size()) != n / 2 + 1) return false;
    for (int i = 0; i <= n / 2; ++i)
      if (!histogram.contains(n - 2 * i)) return false;
    return true;
  }

  [[nodiscard]] bool locally_constant() const { return constancy_violations == 0; }
};

inline void to_json(nlohmann::json& j, const CensusReport& r) {
  nlohmann::json h = nlohmann::json::object();
  for (const auto& [roots, count] : r.histogram) h[std::to_string(roots)] = count;
  j = nlohmann::json{{"n", r.n}, {"samples", r.samples}, {"histogram", h}, {"components", r.components}, {"seed", r.seed}};
}

/// Histogram of #_p over random points. Root totals outside {n - 2i} are a hard
/// failure (GeometryError); wrong-parity totals are redrawn.
inline CensusReport component_census(const Curve& c, int samples, const CensusOptions& opt = {}) {
  if (samples < 1) throw DomainError("component_census: need at least one sample");
  const int n = c.dim();
  c.require_generic();
  std::vector<int> totals(static_cast<std::size_t>(samples));
  std::vector<int> discards(static_cast<std::size_t>(samples));
  std::vector<ProjPoint> points(static_cast<std::size_t>(samples), ProjPoint(Eigen::VectorXd::Unit(n + 1, 0)));
  parallel_for(
      samples,
      [&](int i) {
        auto rng = item_rng(opt.seed, static_cast<std::uint64_t>(i));
        for (int attempt = 0; attempt <= opt.redraws; ++attempt) {
          const ProjPoint p = random_point(rng, n);
          int total = -1;
          try {
            total = count_roots(c, p, opt.tol).total;
          } catch (const PrecisionError&) {
            ++discards[i];
            continue;
          }
          if (total > n || total < 0)
            throw GeometryError("component_census: root count " + std::to_string(total) + " outside [0, " +
                                std::to_string(n) + "] (non-convex curve or numerical failure)");
          if ((n - total) % 2 != 0) {
            ++discards[i];
            continue;
          }
          totals[i] = total;
          points[i] = p;
          return;
        }
        throw PrecisionError("component_census: sample " + std::to_string(i) + " stayed on the discriminant after " +
                             std::to_string(opt.redraws) + " redraws");
      },
      opt.threads);

  CensusReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.seed = opt.seed;
  for (int i = 0; i < samples; ++i) {
    ++rep.histogram[totals[i]];
    rep.discarded += discards[i];
  }
  rep.components = static_cast<int>(rep.histogram.size());

  // Local constancy: the root count survives small perturbations.
  const int checks = std::min(opt.constancy_points, samples);
  std::vector<int> bad(static_cast<std::size_t>(checks));
  parallel_for(
      checks,
      [&](int k) {
        const int idx = static_cast<int>(static_cast<std::int64_t>(k) * samples / checks);
        auto rng = item_rng(opt.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(k));
        const Eigen::VectorXd dir = random_point(rng, n).coords();
        const ProjPoint q(points[idx].coords() + opt.perturbation * dir);
        try {
          if (count_roots(c, q, opt.tol).total != totals[idx]) bad[k] = 1;
        } catch (const PrecisionError&) {
          bad[k] = 1;
        }
      },
      opt.threads);
  rep.constancy_checked = checks;
  for (int b : bad) rep.constancy_violations += b;
  return rep;
}

}  // namespace osculant
