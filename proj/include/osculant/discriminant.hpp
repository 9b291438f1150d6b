#pragma once

// The discriminant D_gamma as a ruled hypersurface: the union of the
// codimension-2 osculating subspaces L^(n-2)_t, sampled on a bounded affine
// grid of each ruling, with OBJ / CSV / JSON writers.

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "osculant/curve.hpp"
#include "osculant/errors.hpp"
#include "osculant/parallel.hpp"
#include "osculant/projective.hpp"
#include "osculant/tangency.hpp"

namespace osculant {

struct RuledPoint {
  int t_index = 0;
  double t = 0.0;
  /// Ruling parameters (n - 2 of them; none for n = 2).
  Eigen::VectorXd ruling;
  /// Homogeneous coordinates normalized to <ell, x> = 1.
  Eigen::VectorXd x;
};

struct RuledSample {
  int n = 0;
  int t_steps = 0;
  int ruling_steps = 0;
  /// Half-width of the ruling grid in chart units.
  double extent = 0.0;
  /// Chart covector and an orthonormal basis of its kernel; chart coordinates are frame^T x.
  Eigen::VectorXd ell;
  Eigen::MatrixXd frame;
  /// Ordered by t index, then ruling grid index with the first parameter varying slowest.
  std::vector<RuledPoint> points;

  [[nodiscard]] int ruling_dim() const { return n >= 3 ? n - 2 : 0; }
  [[nodiscard]] int points_per_ruling() const {
    int k = 1;
    for (int i = 0; i < ruling_dim(); ++i) k *= ruling_steps;
    return k;
  }
  [[nodiscard]] Eigen::VectorXd chart(const RuledPoint& p) const { return frame.transpose() * p.x; }
};

namespace detail {

// Even n: the average osculating hyperplane, whose chart contains the curve.
// Odd n: no chart contains the curve; the principal axis of the curve's second
// moment keeps it as far from infinity as possible on average.
inline Eigen::VectorXd discriminant_chart(const Curve& c) {
  const int n = c.dim();
  const int grid = 512;
  if (n % 2 == 0) {
    Eigen::VectorXd ell = c.dual_table(grid).colwise().mean().transpose();
    const Eigen::VectorXd probe = c.point(0.0);
    if (ell.dot(probe) < 0) ell = -ell;
    return ell.normalized();
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int k = 0; k < grid; ++k) {
    const Eigen::VectorXd x = c.point(c.period() * k / grid).normalized();
    m += x * x.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ell = es.eigenvectors().col(n);
  Eigen::Index lead = 0;
  ell.cwiseAbs().maxCoeff(&lead);
  if (ell[lead] < 0) ell = -ell;
  return ell;
}

}  // namespace detail

/// Samples D_gamma: t_steps rulings, each an affine grid with ruling_steps points
/// per direction on [-extent, extent], extent = 3 x the curve's bounding radius.
inline RuledSample sample_discriminant(const Curve& c, int t_steps, int ruling_steps) {
  const int n = c.dim();
  if (n < 2) throw DomainError("sample_discriminant: need n >= 2");
  if (t_steps < 2) throw DomainError("sample_discriminant: need t_steps >= 2");
  if (n >= 3 && ruling_steps < 2) throw DomainError("sample_discriminant: need ruling_steps >= 2");
  c.require_generic();
  RuledSample out;
  out.n = n;
  out.t_steps = t_steps;
  out.ruling_steps = n >= 3 ? ruling_steps : 1;
  out.ell = detail::discriminant_chart(c);
  out.frame = Subspace::hyperplane(out.ell).basis();

  // Bounding radius of the curve points that sit well inside the chart.
  double radius = 0.0;
  for (int k = 0; k < 512; ++k) {
    const Eigen::VectorXd x = c.point(c.period() * k / 512).normalized();
    const double s = out.ell.dot(x);
    if (std::abs(s) < 0.2) continue;
    radius = std::max(radius, (out.frame.transpose() * x / s).norm());
  }
  if (radius == 0.0) radius = 1.0;
  out.extent = 3.0 * radius;

  const int rd = out.ruling_dim();
  const int per = out.points_per_ruling();
  out.points.resize(static_cast<std::size_t>(t_steps) * per);
  parallel_for(t_steps, [&](int i) {
    const double t = c.period() * i / t_steps;
    const Eigen::MatrixXd jet = c.jet(t, std::max(n - 2, 0)).derivs;
    // Base: the point of L^(n-2)_t in the chart closest to the chart origin.
    const Eigen::MatrixXd basis = jet.transpose();
    const Eigen::VectorXd coef = (out.ell.transpose() * basis).transpose();
    if (coef.norm() <= 1e-12 * basis.norm())
      throw GeometryError("sample_discriminant: a ruling lies at infinity of the chart at t = " + std::to_string(t));
    Eigen::MatrixXd gram = basis.transpose() * basis;
    const Eigen::VectorXd w = gram.ldlt().solve(coef);
    const Eigen::VectorXd x0 = basis * w / coef.dot(w);
    // Directions: jets 1..n-2 moved into the kernel of ell, then orthonormalized.
    Eigen::MatrixXd dirs(n + 1, rd);
    for (int j = 0; j < rd; ++j) {
      const Eigen::VectorXd g = jet.row(j + 1).transpose();
      dirs.col(j) = g - out.ell.dot(g) * x0;
    }
    Eigen::MatrixXd q = dirs;
    for (int j = 0; j < rd; ++j) {
      for (int k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
      const double norm = q.col(j).norm();
      if (norm <= 1e-12 * dirs.col(j).norm())
        throw DegeneracyError("sample_discriminant: ruling directions are dependent at t = " + std::to_string(t));
      q.col(j) /= norm;
    }
    for (int g = 0; g < per; ++g) {
      RuledPoint& p = out.points[static_cast<std::size_t>(i) * per + g];
      p.t_index = i;
      p.t = t;
      p.ruling = Eigen::VectorXd(rd);
      int rem = g;
      for (int j = rd - 1; j >= 0; --j) {
        const int idx = rem % ruling_steps;
        rem /= ruling_steps;
        p.ruling[j] = -out.extent + 2.0 * out.extent * idx / (ruling_steps - 1);
      }
      p.x = x0 + q * p.ruling;
    }
  });
  return out;
}

/// Number of sampled points whose tangency order at the generating moment is below 2.
inline int count_discriminant_violations(const Curve& c, const RuledSample& s, const Tolerances& tol = {}) {
  int bad = 0;
  for (const auto& p : s.points) {
    try {
      if (order_of_tangency(c, ProjPoint(p.x), p.t, tol) < 2) ++bad;
    } catch (const DomainError&) {
      ++bad;
    }
  }
  return bad;
}

enum class ExportFormat { obj, csv, json };

inline ExportFormat export_format_from_string(const std::string& s) {
  if (s == "obj") return ExportFormat::obj;
  if (s == "csv") return ExportFormat::csv;
  if (s == "json") return ExportFormat::json;
  throw UnsupportedFormat("unknown export format \"" + s + "\" (expected obj, csv or json)");
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> sample_columns(const RuledSample& s) {
  std::vector<std::string> cols{"t"};
  for (int j = 0; j < s.ruling_dim(); ++j) cols.push_back("s" + std::to_string(j + 1));
  for (int j = 0; j <= s.n; ++j) cols.push_back("x" + std::to_string(j));
  return cols;
}

}  // namespace detail

/// Vertices in chart coordinates and quads between neighbouring (t, ruling) cells; n = 3 only.
inline void write_obj(const RuledSample& s, std::ostream& os) {
  if (s.n != 3) throw UnsupportedFormat("OBJ export needs n = 3 (got n = " + std::to_string(s.n) + ")");
  if (s.points.empty()) throw DomainError("write_obj: empty sample");
  os << "# discriminant sample: " << s.t_steps << " x " << s.ruling_steps << "\n";
  for (const auto& p : s.points) {
    const Eigen::VectorXd y = s.chart(p);
    os << "v " << detail::fmt_double(y[0]) << ' ' << detail::fmt_double(y[1]) << ' ' << detail::fmt_double(y[2]) << '\n';
  }
  const int r = s.ruling_steps;
  for (int i = 0; i + 1 < s.t_steps; ++i)
    for (int j = 0; j + 1 < r; ++j) {
      const int a = i * r + j + 1;
      os << "f " << a << ' ' << a + r << ' ' << a + r + 1 << ' ' << a + 1 << '\n';
    }
}

inline void write_csv(const RuledSample& s, std::ostream& os) {
  if (s.points.empty()) throw DomainError("write_csv: empty sample");
  const auto cols = detail::sample_columns(s);
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << '\n';
  for (const auto& p : s.points) {
    os << detail::fmt_double(p.t);
    for (Eigen::Index j = 0; j < p.ruling.size(); ++j) os << ',' << detail::fmt_double(p.ruling[j]);
    for (Eigen::Index j = 0; j < p.x.size(); ++j) os << ',' << detail::fmt_double(p.x[j]);
    os << '\n';
  }
}

inline nlohmann::json sample_to_json(const RuledSample& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : s.points) {
    std::vector<double> r{p.t};
    r.insert(r.end(), p.ruling.data(), p.ruling.data() + p.ruling.size());
    r.insert(r.end(), p.x.data(), p.x.data() + p.x.size());
    rows.push_back(r);
  }
  return nlohmann::json{{"n", s.n},
                        {"t_steps", s.t_steps},
                        {"ruling_steps", s.ruling_steps},
                        {"columns", detail::sample_columns(s)},
                        {"points", rows}};
}

inline void write_json(const RuledSample& s, std::ostream& os) {
  if (s.points.empty()) throw DomainError("write_json: empty sample");
  os << sample_to_json(s).dump() << '\n';
}

inline void export_sample(const RuledSample& s, ExportFormat f, std::ostream& os) {
  switch (f) {
    case ExportFormat::obj: write_obj(s, os); return;
    case ExportFormat::csv: write_csv(s, os); return;
    case ExportFormat::json: write_json(s, os); return;
  }
}

inline void export_sample(const RuledSample& s, ExportFormat f, const std::string& path) {
  if (f == ExportFormat::obj && s.n != 3)
    throw UnsupportedFormat("OBJ export needs n = 3 (got n = " + std::to_string(s.n) + ")");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("export: cannot open " + path);
  export_sample(s, f, os);
}

}  // namespace osculant
