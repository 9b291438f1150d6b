#pragma once

// Homogeneous-coordinate linear algebra: points, subspaces, spans and
// intersections of projective subspaces of P^n.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "osculant/errors.hpp"
#include "osculant/tolerances.hpp"

namespace osculant {

/// A point of P^n. The stored representative has unit norm and its first
/// nonzero entry is positive.
class ProjPoint {
public:
  explicit ProjPoint(const Eigen::VectorXd& raw) : coords_(canonical(raw)) {}

  [[nodiscard]] const Eigen::VectorXd& coords() const { return coords_; }
  [[nodiscard]] int dim() const { return static_cast<int>(coords_.size()) - 1; }
  [[nodiscard]] double operator[](Eigen::Index i) const { return coords_[i]; }

  static Eigen::VectorXd canonical(const Eigen::VectorXd& raw) {
    if (raw.size() < 2) throw DomainError("ProjPoint: need at least two homogeneous coordinates");
    if (!raw.allFinite()) throw DomainError("ProjPoint: non-finite coordinate");
    const double norm = raw.norm();
    if (norm == 0.0) throw DomainError("ProjPoint: zero vector has no projective class");
    Eigen::Index lead = 0;
    while (raw[lead] == 0.0) ++lead;
    const bool unit = std::abs(norm - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon();
    if (unit && raw[lead] > 0.0) return raw;
    return (raw[lead] > 0.0 ? 1.0 : -1.0) * raw / norm;
  }

private:
  Eigen::VectorXd coords_;
};

inline ProjPoint normalize(const Eigen::VectorXd& raw) { return ProjPoint(raw); }

/// Chordal distance between projective classes: min |a - b|, |a + b| of unit representatives.
inline double projective_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ua = a.normalized(), ub = b.normalized();
  return std::min((ua - ub).norm(), (ua + ub).norm());
}

inline double projective_distance(const ProjPoint& a, const ProjPoint& b) {
  return projective_distance(a.coords(), b.coords());
}

/// Derivatives 0..order of a homogeneous parameterization; row j is the j-th derivative.
struct Jet {
  int order = 0;
  Eigen::MatrixXd derivs;
};

/// Projective subspace given by an orthonormal basis of its linear cone.
/// The empty subspace has no basis columns and dimension -1.
class Subspace {
public:
  /// Span of the columns; rank is decided with the relative tolerance.
  static Subspace span(const Eigen::MatrixXd& columns, double rank_tol = Tolerances{}.rank) {
    const int ambient = static_cast<int>(columns.rows()) - 1;
    if (columns.cols() == 0) return empty(ambient);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeThinU);
    const int r = rank_of(svd.singularValues(), rank_tol);
    return Subspace(ambient, svd.matrixU().leftCols(r));
  }

  /// Span of columns that must be independent; throws DegeneracyError otherwise.
  static Subspace independent(const Eigen::MatrixXd& columns, double rank_tol = Tolerances{}.rank) {
    Subspace s = span(columns, rank_tol);
    if (s.dim() + 1 != columns.cols())
      throw DegeneracyError("Subspace: spanning vectors are linearly dependent (rank " +
                            std::to_string(s.dim() + 1) + " < " + std::to_string(columns.cols()) + ")");
    return s;
  }

  static Subspace empty(int ambient_dim) {
    return Subspace(ambient_dim, Eigen::MatrixXd(ambient_dim + 1, 0));
  }

  static Subspace whole(int ambient_dim) {
    return Subspace(ambient_dim, Eigen::MatrixXd::Identity(ambient_dim + 1, ambient_dim + 1));
  }

  /// Hyperplane {x : <h, x> = 0}.
  static Subspace hyperplane(const Eigen::VectorXd& covector) {
    Subspace dual = span(covector);
    if (dual.dim() < 0) throw DomainError("Subspace::hyperplane: zero covector");
    return Subspace(static_cast<int>(covector.size()) - 1, dual.annihilator());
  }

  [[nodiscard]] int dim() const { return static_cast<int>(basis_.cols()) - 1; }
  [[nodiscard]] int ambient_dim() const { return ambient_; }
  [[nodiscard]] bool is_empty() const { return basis_.cols() == 0; }
  [[nodiscard]] const Eigen::MatrixXd& basis() const { return basis_; }

  /// Orthonormal basis (columns) of the orthogonal complement of the linear cone.
  [[nodiscard]] Eigen::MatrixXd annihilator() const {
    const int n1 = ambient_ + 1;
    if (basis_.cols() == 0) return Eigen::MatrixXd::Identity(n1, n1);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis_);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n1, n1);
    return q.rightCols(n1 - basis_.cols());
  }

  /// Euclidean distance from the unit representative of v to the linear cone.
  [[nodiscard]] double distance(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd u = v.normalized();
    if (basis_.cols() == 0) return 1.0;
    return (u - basis_ * (basis_.transpose() * u)).norm();
  }

  [[nodiscard]] bool contains(const Eigen::VectorXd& v, double tol = Tolerances{}.rank) const {
    return distance(v) <= tol;
  }

  /// Every basis vector of `other` lies in this subspace.
  [[nodiscard]] bool contains(const Subspace& other, double tol = Tolerances{}.rank) const {
    for (Eigen::Index j = 0; j < other.basis().cols(); ++j)
      if (!contains(other.basis().col(j), tol)) return false;
    return true;
  }

  /// The unique point of a zero-dimensional subspace.
  [[nodiscard]] Eigen::VectorXd point() const {
    if (dim() != 0) throw DomainError("Subspace::point: subspace is not a point");
    return basis_.col(0);
  }

  static int rank_of(const Eigen::VectorXd& singular_values, double rank_tol) {
    if (singular_values.size() == 0) return 0;
    const double top = singular_values[0];
    if (top == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i)
      if (singular_values[i] > rank_tol * top) ++r;
    return r;
  }

private:
  Subspace(int ambient, Eigen::MatrixXd basis) : ambient_(ambient), basis_(std::move(basis)) {}

  int ambient_ = 0;
  Eigen::MatrixXd basis_;
};

/// Projective intersection, computed as the joint null space of the stacked
/// annihilating forms.
inline Subspace intersect(std::span<const Subspace> subs, double rank_tol = Tolerances{}.rank) {
  if (subs.empty()) throw DomainError("intersect: no subspaces given");
  const int n = subs.front().ambient_dim();
  std::vector<Eigen::MatrixXd> forms;
  Eigen::Index total = 0;
  for (const auto& s : subs) {
    if (s.ambient_dim() != n) throw DomainError("intersect: ambient dimensions differ");
    forms.push_back(s.annihilator().transpose());
    total += forms.back().rows();
  }
  if (total == 0) return Subspace::whole(n);
  Eigen::MatrixXd stacked(total, n + 1);
  Eigen::Index row = 0;
  for (const auto& f : forms) {
    stacked.middleRows(row, f.rows()) = f;
    row += f.rows();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const int r = Subspace::rank_of(svd.singularValues(), rank_tol);
  if (r >= n + 1) return Subspace::empty(n);
  return Subspace::span(svd.matrixV().rightCols(n + 1 - r), rank_tol);
}

inline Subspace intersect(std::initializer_list<Subspace> subs, double rank_tol = Tolerances{}.rank) {
  std::vector<Subspace> v(subs);
  return intersect(std::span<const Subspace>(v), rank_tol);
}

/// Osculating subspace L^k spanned by jet rows 0..k.
inline Subspace osculating_subspace(const Jet& jet, int k, double rank_tol = Tolerances{}.rank) {
  if (k < 0 || k > jet.order) throw DomainError("osculating_subspace: order exceeds the jet");
  try {
    return Subspace::independent(jet.derivs.topRows(k + 1).transpose(), rank_tol);
  } catch (const DegeneracyError&) {
    throw DegeneracyError("osculating_subspace: jet rows 0.." + std::to_string(k) +
                          " are dependent; curve is degenerate here");
  }
}

/// Generalized cross product of n vectors in R^{n+1} (rows of `rows`):
/// the covector x -> det[rows; x].
inline Eigen::VectorXd cofactor_covector(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  if (rows.cols() != n + 1) throw DomainError("cofactor_covector: expected n x (n+1) input");
  Eigen::VectorXd out(n + 1);
  Eigen::MatrixXd minor(n, n);
  for (Eigen::Index k = 0; k <= n; ++k) {
    if (k > 0) minor.leftCols(k) = rows.leftCols(k);
    if (k < n) minor.rightCols(n - k) = rows.rightCols(n - k);
    const double sign = ((n + k) % 2 == 0) ? 1.0 : -1.0;
    out[k] = n == 0 ? sign : sign * minor.partialPivLu().determinant();
  }
  return out;
}

}  // namespace osculant
