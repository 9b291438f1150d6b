#pragma once

// Closed curves S^1 -> P^n with exact jets: the rational normal curve, the
// trigonometric convex curves, user Fourier curves, and derived curves (duals,
// projections) that share the same representation.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "osculant/errors.hpp"
#include "osculant/projective.hpp"
#include "osculant/tolerances.hpp"
#include "osculant/trig_series.hpp"

namespace osculant {

enum class ModelKind { rational_normal, trig_convex, fourier, dual, projected };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::rational_normal: return "rational_normal";
    case ModelKind::trig_convex: return "trig_convex";
    case ModelKind::fourier: return "fourier";
    case ModelKind::dual: return "dual";
    case ModelKind::projected: return "projected";
  }
  return "unknown";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "rational_normal") return ModelKind::rational_normal;
  if (s == "trig_convex") return ModelKind::trig_convex;
  if (s == "fourier") return ModelKind::fourier;
  throw DomainError("unknown curve model '" + s + "'");
}

/// Immutable closed curve in P^n. Copies share state.
class Curve {
public:
  Curve(ModelKind kind, const TrigVector& coords, std::string label = {})
      : impl_(std::make_shared<Impl>(kind, coords.normalized(), std::move(label))) {}

  [[nodiscard]] ModelKind kind() const { return impl_->kind; }
  [[nodiscard]] const std::string& label() const { return impl_->label; }
  /// Projective dimension n (n+1 homogeneous coordinates).
  [[nodiscard]] int dim() const { return impl_->coords.rows() - 1; }
  /// Parameter period P of the closed curve; gamma(t + P) = +-gamma(t).
  [[nodiscard]] double period() const { return impl_->coords.period(); }
  [[nodiscard]] const TrigVector& coords() const { return impl_->coords; }
  /// Cofactor covector gamma*(t) of rows gamma, ..., gamma^(n-1): <gamma*(t), p> = det[...; p].
  [[nodiscard]] const TrigVector& dual() const { return impl_->dual; }

  [[nodiscard]] Eigen::VectorXd point(double t) const { return impl_->coords.value(t); }

  [[nodiscard]] Jet jet(double t, int d) const { return Jet{d, impl_->coords.jet(t, d)}; }

  /// Wraps t into [0, P).
  [[nodiscard]] double wrap(double t) const {
    double r = std::fmod(t, period());
    if (r < 0) r += period();
    if (r >= period()) r = 0.0;
    return r;
  }

  /// gamma*(t_k) for t_k = k P / grid; rows are grid points. Cached for the default grid.
  [[nodiscard]] Eigen::MatrixXd dual_table(int grid) const {
    if (grid == Tolerances{}.grid) {
      std::call_once(impl_->table_once, [&] { impl_->table = build_table(grid); });
      return impl_->table;
    }
    return build_table(grid);
  }

  [[nodiscard]] const Eigen::MatrixXd& default_dual_table() const {
    std::call_once(impl_->table_once, [&] { impl_->table = build_table(Tolerances{}.grid); });
    return impl_->table;
  }

  /// Jets 0..n-1 have full rank at every sampled parameter.
  [[nodiscard]] bool is_generic() const {
    std::call_once(impl_->check_once, [&] { run_checks(); });
    return impl_->generic;
  }

  /// Jets 0..n have full rank at every sampled parameter.
  [[nodiscard]] bool is_nondegenerate() const {
    std::call_once(impl_->check_once, [&] { run_checks(); });
    return impl_->nondegenerate;
  }

  void require_generic() const {
    if (!is_generic()) throw DegeneracyError("curve " + label() + " is not generic (order-(n-1) jet loses rank)");
  }

  void require_nondegenerate() const {
    if (!is_nondegenerate()) throw DegeneracyError("curve " + label() + " is degenerate (order-n jet loses rank)");
  }

private:
  struct Impl {
    Impl(ModelKind k, TrigVector c, std::string l) : kind(k), label(std::move(l)), coords(std::move(c)) {
      if (coords.rows() < 2) throw DomainError("Curve: need n >= 1");
      if (coords.parity() < 0)
        throw DomainError("Curve: coordinates mix periodic and antiperiodic terms; not a closed projective curve");
      if (label.empty()) label = to_string(kind) + "(" + std::to_string(coords.rows() - 1) + ")";
      dual = compute_dual(coords);
    }

    ModelKind kind;
    std::string label;
    TrigVector coords;
    TrigVector dual;
    mutable std::once_flag table_once;
    mutable Eigen::MatrixXd table;
    mutable std::once_flag check_once;
    mutable bool generic = false;
    mutable bool nondegenerate = false;
  };

  static TrigVector compute_dual(const TrigVector& coords) {
    const int n = coords.rows() - 1;
    const int max_index = n * coords.max_index();
    TrigVector d = fit_trig(
        [&](double t) { return cofactor_covector(coords.jet(t, n - 1)); }, n + 1, coords.period(), max_index);
    return d.normalized();
  }

  Eigen::MatrixXd build_table(int grid) const {
    const auto& d = impl_->dual;
    Eigen::MatrixXd out(grid, d.rows());
    for (int k = 0; k < grid; ++k) out.row(k) = d.value(period() * k / grid).transpose();
    return out;
  }

  void run_checks() const {
    const int n = dim();
    const int samples = 257;
    bool gen = true, nondeg = true;
    for (int k = 0; k < samples && nondeg; ++k) {
      const double t = period() * (k + 0.37) / samples;
      const Eigen::MatrixXd j = impl_->coords.jet(t, n);
      Eigen::JacobiSVD<Eigen::MatrixXd> full(j);
      if (Subspace::rank_of(full.singularValues(), Tolerances{}.rank) < n + 1) nondeg = false;
      Eigen::JacobiSVD<Eigen::MatrixXd> low(j.topRows(n));
      if (Subspace::rank_of(low.singularValues(), Tolerances{}.rank) < n) {
        gen = false;
        nondeg = false;
      }
    }
    impl_->generic = gen;
    impl_->nondegenerate = nondeg;
  }

  std::shared_ptr<Impl> impl_;
};

/// Projectivized (cos^n th, cos^(n-1) th sin th, ..., sin^n th), th in [0, pi).
/// In the chart x0 = 1 this is (t, t^2, ..., t^n) with t = tan th.
inline Curve rational_normal(int n) {
  if (n < 2) throw DomainError("rational_normal: n must be >= 2");
  TrigVector c = fit_trig(
      [n](double th) {
        Eigen::VectorXd v(n + 1);
        const double c = std::cos(th), s = std::sin(th);
        for (int j = 0; j <= n; ++j) v[j] = std::pow(c, n - j) * std::pow(s, j);
        return v;
      },
      n + 1, std::numbers::pi, n);
  return Curve(ModelKind::rational_normal, c, "rational_normal(" + std::to_string(n) + ")");
}

/// n = 2k: (1, cos t, sin t, ..., cos kt, sin kt) on [0, 2 pi).
/// n = 2k+1: (cos t, sin t, cos 3t, sin 3t, ..., cos (2k+1)t, sin (2k+1)t) on [0, pi).
inline Curve trig_convex(int n) {
  if (n < 2) throw DomainError("trig_convex: n must be >= 2");
  const int k = n / 2;
  if (n % 2 == 0) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + 1, 2 * k + 1), s = c;
    c(0, 0) = 1.0;
    for (int j = 1; j <= k; ++j) {
      c(2 * j - 1, 2 * j) = 1.0;
      s(2 * j, 2 * j) = 1.0;
    }
    return Curve(ModelKind::trig_convex, TrigVector(2.0 * std::numbers::pi, c, s),
                 "trig_convex(" + std::to_string(n) + ")");
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + 1, 2 * k + 2), s = c;
  for (int j = 0; j <= k; ++j) {
    const int h = 2 * j + 1;
    c(2 * j, h) = 1.0;
    s(2 * j + 1, h) = 1.0;
  }
  return Curve(ModelKind::trig_convex, TrigVector(std::numbers::pi, c, s), "trig_convex(" + std::to_string(n) + ")");
}

/// User Fourier curve. Row r of `coeffs` is [a0, a1, b1, a2, b2, ...] for
/// coordinate r = a0 + sum_h a_h cos(h t) + b_h sin(h t). The parameter period is
/// reduced to the true projective period (e.g. pi when only odd harmonics occur).
inline Curve fourier_curve(const std::vector<std::vector<double>>& coeffs, std::string label = {}) {
  if (coeffs.size() < 3) throw DomainError("fourier: need at least 3 coordinate rows (n >= 2)");
  std::size_t width = 0;
  for (const auto& r : coeffs) width = std::max(width, r.size());
  if (width == 0) throw DomainError("fourier: empty coefficient rows");
  const int harmonics = static_cast<int>(width) / 2;
  const int rows = static_cast<int>(coeffs.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, harmonics + 1), b = a;
  for (int r = 0; r < rows; ++r) {
    const auto& row = coeffs[r];
    if (!row.empty()) a(r, 0) = row[0];
    for (int h = 1; h <= harmonics; ++h) {
      if (2 * h - 1 < static_cast<int>(row.size())) a(r, h) = row[2 * h - 1];
      if (2 * h < static_cast<int>(row.size())) b(r, h) = row[2 * h];
    }
  }
  if (a.cwiseAbs().maxCoeff() == 0.0 && b.cwiseAbs().maxCoeff() == 0.0)
    throw DomainError("fourier: all coefficients are zero");
  // g = gcd of occurring harmonics; constant terms force the 2 pi / g period.
  int g = 0;
  bool constant = false, all_odd = true;
  for (int h = 0; h <= harmonics; ++h) {
    if (a.col(h).cwiseAbs().maxCoeff() == 0.0 && b.col(h).cwiseAbs().maxCoeff() == 0.0) continue;
    if (h == 0) constant = true;
    else g = std::gcd(g, h);
  }
  if (g == 0) throw DomainError("fourier: constant curve");
  for (int h = 1; h <= harmonics; ++h) {
    if (a.col(h).cwiseAbs().maxCoeff() == 0.0 && b.col(h).cwiseAbs().maxCoeff() == 0.0) continue;
    if ((h / g) % 2 == 0) all_odd = false;
  }
  const bool anti = all_odd && !constant;
  // Period pi/g with index h/g (odd), or 2 pi/g with index 2h/g.
  const double period = (anti ? std::numbers::pi : 2.0 * std::numbers::pi) / g;
  const int stretch = anti ? 1 : 2;
  const int max_index = stretch * harmonics / g;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(rows, max_index + 1), s = c;
  for (int h = 0; h <= harmonics; ++h) {
    if (h % g != 0) continue;
    const int m = stretch * h / g;
    c.col(m) = a.col(h);
    s.col(m) = b.col(h);
  }
  if (label.empty()) label = "fourier(" + std::to_string(rows - 1) + ")";
  return Curve(ModelKind::fourier, TrigVector(period, c, s), std::move(label));
}

/// Curve of osculating hyperplanes gamma*(t) in the dual projective space.
inline Curve dual_curve(const Curve& c) {
  c.require_generic();
  return Curve(ModelKind::dual, c.dual(), "dual(" + c.label() + ")");
}

/// Jet of order d; 0 <= d <= n+1.
inline Jet eval_jet(const Curve& c, double t, int d) {
  if (d < 0 || d > c.dim() + 1) throw DomainError("eval_jet: order must lie in [0, n+1]");
  return c.jet(t, d);
}

/// Osculating subspace L^k_t = span(gamma(t), ..., gamma^(k)(t)), 0 <= k <= n.
inline Subspace osculating_subspace(const Curve& c, double t, int k, double rank_tol = Tolerances{}.rank) {
  if (k < 0 || k > c.dim()) throw DomainError("osculating_subspace: k must lie in [0, n]");
  return osculating_subspace(c.jet(t, k), k, rank_tol);
}

/// Intersection of the osculating subspaces of codimension codims[i] at
/// moments[i]; coincident moments merge (codimensions add). The joint
/// annihilator is spanned by divided differences of the dual curve over the
/// moments repeated codims[i] times, which stays well conditioned for close moments.
inline Subspace osculating_intersection(const Curve& c, const std::vector<double>& moments,
                                        const std::vector<int>& codims, double rank_tol = Tolerances{}.rank) {
  if (moments.size() != codims.size() || moments.empty())
    throw DomainError("osculating_intersection: need one codimension per moment");
  const int n = c.dim();
  std::vector<std::pair<double, int>> m;
  for (std::size_t i = 0; i < moments.size(); ++i) {
    if (codims[i] < 1 || codims[i] > n + 1) throw DomainError("osculating_intersection: codimension out of range");
    m.emplace_back(c.wrap(moments[i]), codims[i]);
  }
  std::sort(m.begin(), m.end());
  // Cut the circle at the widest gap so that close moments are adjacent nodes.
  std::size_t cut = 0;
  double widest = m.front().first + c.period() - m.back().first;
  for (std::size_t i = 1; i < m.size(); ++i)
    if (m[i].first - m[i - 1].first > widest) {
      widest = m[i].first - m[i - 1].first;
      cut = i;
    }
  std::vector<double> nodes;
  for (std::size_t r = 0; r < m.size(); ++r) {
    const std::size_t i = (cut + r) % m.size();
    const double t = m[i].first + (i < cut ? c.period() : 0.0);
    for (int k = 0; k < m[i].second; ++k) nodes.push_back(t);
  }
  Eigen::MatrixXd rows = divided_differences(c.dual(), nodes);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const double norm = rows.row(r).norm();
    if (norm == 0.0) throw DegeneracyError("osculating_intersection: dual curve jet vanishes");
    rows.row(r) /= norm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const int rank = Subspace::rank_of(svd.singularValues(), rank_tol);
  if (rank >= n + 1) return Subspace::empty(n);
  return Subspace::span(svd.matrixV().rightCols(n + 1 - rank), rank_tol);
}

/// Osculating hyperplane H_t as a covector, i.e. gamma*(t).
inline Eigen::VectorXd osculating_covector(const Curve& c, double t) { return c.dual().value(t); }

inline Curve build_model(ModelKind kind, int n, const std::vector<std::vector<double>>& coeffs = {}) {
  switch (kind) {
    case ModelKind::rational_normal: return rational_normal(n);
    case ModelKind::trig_convex: return trig_convex(n);
    case ModelKind::fourier: {
      Curve c = fourier_curve(coeffs);
      if (n > 0 && c.dim() != n) throw DomainError("fourier: n does not match the coefficient rows");
      return c;
    }
    default: throw DomainError("build_model: only rational_normal, trig_convex and fourier are buildable");
  }
}

/// {"model": "rational_normal"|"trig_convex"|"fourier", "n": int, "coeffs": [[...]]}
inline Curve curve_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("model")) throw DomainError("curve file: missing \"model\"");
  const ModelKind kind = model_kind_from_string(j.at("model").get<std::string>());
  int n = j.value("n", 0);
  std::vector<std::vector<double>> coeffs;
  if (j.contains("coeffs")) coeffs = j.at("coeffs").get<std::vector<std::vector<double>>>();
  if (kind == ModelKind::fourier && coeffs.empty()) throw DomainError("curve file: fourier model needs \"coeffs\"");
  if (kind != ModelKind::fourier && n < 2) throw DomainError("curve file: \"n\" must be >= 2");
  return build_model(kind, n, coeffs);
}

inline Curve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open curve file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("curve file '" + path + "': " + e.what());
  }
  return curve_from_json(j);
}

}  // namespace osculant
