#pragma once

// Projection of a curve onto its osculating hyperplane H_tau along tangent
// lines: gamma^tau(t) = H_tau ∩ l_t, and iterated projections.
//
// With h = gamma*(tau) the point g(t) = <h, gamma'(t)> gamma(t) - <h, gamma(t)> gamma'(t)
// lies on l_t and in H_tau. It vanishes to order n-1 at tau (and at tau + P on
// the double cover), so g / sin(w (t - tau))^(n-1) is again a finite Fourier
// series; the division is carried out exactly on Laurent coefficients.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "osculant/curve.hpp"
#include "osculant/errors.hpp"
#include "osculant/projective.hpp"
#include "osculant/trig_series.hpp"

namespace osculant {

/// Curve inside an intersection of osculating hyperplanes of `base`, stored in
/// orthonormal internal coordinates of that subspace.
struct ProjectedCurve {
  Curve base;
  std::vector<double> moments;
  Subspace ambient;
  /// Columns: orthonormal basis of the ambient cone in base coordinates.
  Eigen::MatrixXd embedding;
  Curve curve;

  [[nodiscard]] Eigen::VectorXd to_internal(const Eigen::VectorXd& p) const { return embedding.transpose() * p; }
  [[nodiscard]] Eigen::VectorXd to_base(const Eigen::VectorXd& x) const { return embedding * x; }
  /// Projective point of base coordinates p, which must lie in the ambient subspace.
  [[nodiscard]] ProjPoint internal_point(const Eigen::VectorXd& p, double tol = 1e-8) const {
    if (!ambient.contains(p, tol)) throw DomainError("ProjectedCurve: point is not in the ambient subspace");
    return ProjPoint(to_internal(p));
  }
};

namespace detail {

// Divides the polynomial with ascending coefficients `a` by (u - r) in place;
// returns the remainder.
inline std::complex<double> deflate(Eigen::VectorXcd& a, std::complex<double> r) {
  const Eigen::Index d = a.size() - 1;
  Eigen::VectorXcd q(d);
  std::complex<double> carry = 0.0;
  for (Eigen::Index k = d; k >= 1; --k) {
    carry = a[k] + r * carry;
    q[k - 1] = carry;
  }
  const std::complex<double> rem = a[0] + r * carry;
  a = q;
  return rem;
}

// g / sin(w (t - tau))^order for a series g vanishing to that order at tau and tau + P.
inline TrigVector divide_by_sine_power(const TrigVector& g, double tau, int order) {
  const int mg = g.max_index();
  if (mg < order) throw GeometryError("projection: series is too short to vanish to the required order");
  const double w = g.base_frequency();
  const std::complex<double> w0 = std::polar(1.0, w * tau);
  const Eigen::MatrixXcd lau = to_laurent(g);
  const double scale = lau.cwiseAbs().maxCoeff();
  const int big = mg - order;
  Eigen::MatrixXcd out(g.rows(), 2 * big + 1);
  const std::complex<double> factor = std::pow(std::complex<double>(0.0, 2.0) * w0, order);
  for (int r = 0; r < g.rows(); ++r) {
    Eigen::VectorXcd poly = lau.row(r).transpose();
    for (int k = 0; k < order; ++k) {
      const auto rem1 = deflate(poly, w0);
      const auto rem2 = deflate(poly, -w0);
      if (std::abs(rem1) > 1e-7 * scale || std::abs(rem2) > 1e-7 * scale)
        throw GeometryError("projection: the tangent-line map does not vanish to order " + std::to_string(order) +
                            " at tau; the curve is not nondegenerate there");
    }
    out.row(r) = (factor * poly).transpose();
  }
  return from_laurent(out, g.period());
}

}  // namespace detail

/// gamma^tau as a curve in internal coordinates of H_tau.
inline ProjectedCurve project_onto_osculating_hyperplane(const Curve& c, double tau) {
  c.require_generic();
  const int n = c.dim();
  if (n < 2) throw DomainError("project_onto_osculating_hyperplane: need n >= 2");
  const Eigen::VectorXd h = c.dual().value(tau).normalized();
  const TrigVector& coords = c.coords();
  const TrigVector g = fit_trig(
      [&](double t) {
        const Eigen::MatrixXd j = coords.jet(t, 1);
        const Eigen::VectorXd x = j.row(0).transpose(), dx = j.row(1).transpose();
        return Eigen::VectorXd(h.dot(dx) * x - h.dot(x) * dx);
      },
      n + 1, c.period(), 2 * coords.max_index());
  const TrigVector lifted = detail::divide_by_sine_power(g, tau, n - 1);

  const Subspace plane = Subspace::hyperplane(h);
  const Eigen::MatrixXd basis = plane.basis();
  const TrigVector internal = lifted.transform(basis.transpose());

  // The map is regular exactly when no tangent line l_t (t != tau) lies in H_tau.
  const int probes = std::max(256, 8 * (internal.max_index() + 1));
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = 0; k < probes; ++k) {
    const double v = internal.value(c.period() * (k + 0.5) / probes).norm();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo > 1e-8 * hi))
    throw GeometryError("projection: some tangent line lies in the osculating hyperplane at tau = " +
                        std::to_string(tau) + " (non-convex input)");

  Curve projected(ModelKind::projected, internal, c.label() + "^{" + std::to_string(tau) + "}");
  if (!projected.is_generic())
    throw GeometryError("projection: projected curve is not generic (non-convex input)");
  return ProjectedCurve{c, {tau}, plane, basis, projected};
}

/// Repeated projection gamma^{t_1, ..., t_k}; coincident moments follow the
/// merge convention (projection into the higher-codimension osculating subspace).
inline ProjectedCurve project_iterated(const Curve& c, const std::vector<double>& moments) {
  const int n = c.dim();
  const int k = static_cast<int>(moments.size());
  if (k > n - 2) throw DomainError("project_iterated: at most n-2 moments keep the result a curve");
  ProjectedCurve out{c, {}, Subspace::whole(n), Eigen::MatrixXd::Identity(n + 1, n + 1), c};
  for (double t : moments) {
    ProjectedCurve step = project_onto_osculating_hyperplane(out.curve, t);
    out.embedding = out.embedding * step.embedding;
    out.curve = step.curve;
    out.moments.push_back(t);
  }
  out.ambient = Subspace::span(out.embedding);
  return out;
}

}  // namespace osculant
