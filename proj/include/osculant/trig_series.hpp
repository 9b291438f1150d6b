#pragma once

// Finite real Fourier series in a half-frequency index. A series with period P
// has terms a_m cos(m w t) + b_m sin(m w t) with w = pi / P, so even indices are
// P-periodic and odd indices are P-antiperiodic. Every curve in the library
// (models, duals, projections) is stored this way, which makes all jets exact.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "osculant/errors.hpp"

namespace osculant {

namespace detail {

// e^{i m x} for m = 0..max_index by repeated multiplication.
inline std::vector<std::complex<double>> unit_powers(double x, int max_index) {
  std::vector<std::complex<double>> z(static_cast<std::size_t>(max_index) + 1);
  const std::complex<double> step = std::polar(1.0, x);
  z[0] = 1.0;
  for (int m = 1; m <= max_index; ++m) {
    // Re-anchor every 16 steps to keep the recurrence drift at roundoff level.
    z[m] = (m % 16 == 0) ? std::polar(1.0, m * x) : z[m - 1] * step;
  }
  return z;
}

// i^d
inline std::complex<double> i_power(int d) {
  switch (((d % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Parity shared by all columns whose magnitude exceeds rel * max; -1 when mixed.
inline int column_parity(const Eigen::MatrixXd& c, const Eigen::MatrixXd& s, double rel = 1e-12) {
  double peak = std::max(c.cwiseAbs().maxCoeff(), s.cwiseAbs().maxCoeff());
  if (peak == 0.0) return 0;
  int parity = -2;
  for (Eigen::Index m = 0; m < c.cols(); ++m) {
    double col = std::max(c.col(m).cwiseAbs().maxCoeff(), s.col(m).cwiseAbs().maxCoeff());
    if (col <= rel * peak) continue;
    int p = static_cast<int>(m % 2);
    if (parity == -2) parity = p;
    else if (parity != p) return -1;
  }
  return parity == -2 ? 0 : parity;
}

}  // namespace detail

/// Vector-valued finite Fourier series: one row per homogeneous coordinate,
/// column m holds the coefficients of cos(m w t) and sin(m w t).
class TrigVector {
public:
  TrigVector() = default;

  TrigVector(double period, Eigen::MatrixXd cos_coef, Eigen::MatrixXd sin_coef)
      : period_(period), cos_(std::move(cos_coef)), sin_(std::move(sin_coef)) {
    if (!(period_ > 0.0)) throw DomainError("TrigVector: period must be positive");
    if (cos_.rows() != sin_.rows() || cos_.cols() != sin_.cols() || cos_.cols() == 0)
      throw DomainError("TrigVector: coefficient shapes disagree");
    sin_.col(0).setZero();
    trim();
    parity_ = detail::column_parity(cos_, sin_);
    if (parity_ >= 0) {
      // Drop roundoff-level coefficients of the other parity.
      for (Eigen::Index m = 1 - parity_; m < cos_.cols(); m += 2) {
        cos_.col(m).setZero();
        sin_.col(m).setZero();
      }
    }
  }

  [[nodiscard]] double period() const { return period_; }
  [[nodiscard]] double base_frequency() const { return std::numbers::pi / period_; }
  [[nodiscard]] int rows() const { return static_cast<int>(cos_.rows()); }
  [[nodiscard]] int max_index() const { return static_cast<int>(cos_.cols()) - 1; }
  /// 0: f(t+P) = f(t); 1: f(t+P) = -f(t); -1: neither.
  [[nodiscard]] int parity() const { return parity_; }
  [[nodiscard]] const Eigen::MatrixXd& cos_coef() const { return cos_; }
  [[nodiscard]] const Eigen::MatrixXd& sin_coef() const { return sin_; }

  /// d-th derivative at t.
  [[nodiscard]] Eigen::VectorXd value(double t, int d = 0) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(rows());
    const double w = base_frequency();
    const auto z = detail::unit_powers(w * t, max_index());
    const auto rot = detail::i_power(d);
    for (int m = 0; m <= max_index(); ++m) {
      const double wm = w * m;
      if (d > 0 && m == 0) continue;
      const std::complex<double> e = rot * z[m];
      const double scale = d == 0 ? 1.0 : std::pow(wm, d);
      out.noalias() += (scale * e.real()) * cos_.col(m) + (scale * e.imag()) * sin_.col(m);
    }
    return out;
  }

  /// Rows 0..d hold derivatives 0..d; columns are coordinates.
  [[nodiscard]] Eigen::MatrixXd jet(double t, int d) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d + 1, rows());
    const double w = base_frequency();
    const auto z = detail::unit_powers(w * t, max_index());
    for (int m = 0; m <= max_index(); ++m) {
      const double wm = w * m;
      double scale = 1.0;
      std::complex<double> e = z[m];
      for (int j = 0; j <= d; ++j) {
        if (j > 0) {
          scale *= wm;
          e *= std::complex<double>(0.0, 1.0);
        }
        if (scale == 0.0) break;
        out.row(j).noalias() +=
            ((scale * e.real()) * cos_.col(m) + (scale * e.imag()) * sin_.col(m)).transpose();
      }
    }
    return out;
  }

  [[nodiscard]] TrigVector transform(const Eigen::MatrixXd& a) const {
    return TrigVector(period_, a * cos_, a * sin_);
  }

  [[nodiscard]] double coefficient_peak() const {
    return std::max(cos_.cwiseAbs().maxCoeff(), sin_.cwiseAbs().maxCoeff());
  }

  /// Same curve with coefficients rescaled so the largest has magnitude 1.
  [[nodiscard]] TrigVector normalized() const {
    const double peak = coefficient_peak();
    if (peak == 0.0) return *this;
    return TrigVector(period_, cos_ / peak, sin_ / peak);
  }

private:
  void trim() {
    double peak = coefficient_peak();
    Eigen::Index keep = cos_.cols();
    while (keep > 1) {
      const Eigen::Index m = keep - 1;
      const double col = std::max(cos_.col(m).cwiseAbs().maxCoeff(), sin_.col(m).cwiseAbs().maxCoeff());
      if (col > 1e-14 * peak) break;
      --keep;
    }
    if (keep != cos_.cols()) {
      cos_ = cos_.leftCols(keep).eval();
      sin_ = sin_.leftCols(keep).eval();
    }
  }

  double period_ = 2.0 * std::numbers::pi;
  Eigen::MatrixXd cos_;
  Eigen::MatrixXd sin_;
  int parity_ = 0;
};

/// Scalar series; a thin view over a one-row TrigVector with scalar evaluation.
class TrigSeries {
public:
  TrigSeries() = default;
  explicit TrigSeries(TrigVector v) : v_(std::move(v)) {
    if (v_.rows() != 1) throw DomainError("TrigSeries: expected a single row");
  }

  [[nodiscard]] double period() const { return v_.period(); }
  [[nodiscard]] int parity() const { return v_.parity(); }
  [[nodiscard]] int max_index() const { return v_.max_index(); }
  [[nodiscard]] double base_frequency() const { return v_.base_frequency(); }
  [[nodiscard]] const TrigVector& coefficients() const { return v_; }

  [[nodiscard]] double operator()(double t, int d = 0) const {
    const double w = v_.base_frequency();
    const auto z = detail::unit_powers(w * t, v_.max_index());
    const auto rot = detail::i_power(d);
    double acc = 0.0;
    for (int m = (d > 0 ? 1 : 0); m <= v_.max_index(); ++m) {
      const std::complex<double> e = rot * z[m];
      const double scale = d == 0 ? 1.0 : std::pow(w * m, d);
      acc += scale * (e.real() * v_.cos_coef()(0, m) + e.imag() * v_.sin_coef()(0, m));
    }
    return acc;
  }

  /// Upper bound for max_t |f^(d)(t)| from the coefficients.
  [[nodiscard]] double derivative_bound(int d) const {
    const double w = v_.base_frequency();
    double acc = 0.0;
    for (int m = 0; m <= v_.max_index(); ++m) {
      const double a = std::hypot(v_.cos_coef()(0, m), v_.sin_coef()(0, m));
      acc += a * (d == 0 ? 1.0 : std::pow(w * m, d));
    }
    return acc;
  }

  /// Values on the grid t_k = k P / n, k = 0..n-1.
  [[nodiscard]] std::vector<double> sample(int n) const {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[k] = (*this)(period() * k / n);
    return out;
  }

private:
  TrigVector v_;
};

/// w^T f as a scalar series.
inline TrigSeries dot(const Eigen::VectorXd& w, const TrigVector& f) {
  return TrigSeries(f.transform(w.transpose()));
}

/// Fits a series with indices <= max_index to a callable t -> VectorXd by an
/// exact discrete Fourier transform over the double period.
template <class Fn>
TrigVector fit_trig(Fn&& fn, int rows, double period, int max_index) {
  int n = 1;
  while (n < 2 * max_index + 2) n *= 2;
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows, max_index + 1);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * period * k / n;
    const Eigen::VectorXd v = fn(t);
    if (v.size() != rows) throw DomainError("fit_trig: callable returned the wrong size");
    for (int m = 0; m <= max_index; ++m) {
      const std::complex<double> e = std::polar(1.0, -two_pi * m * static_cast<double>(k % n) / n);
      acc.col(m) += v.cast<std::complex<double>>() * e;
    }
  }
  acc /= static_cast<double>(n);
  Eigen::MatrixXd c(rows, max_index + 1), s(rows, max_index + 1);
  c.col(0) = acc.col(0).real();
  s.col(0).setZero();
  for (int m = 1; m <= max_index; ++m) {
    c.col(m) = 2.0 * acc.col(m).real();
    s.col(m) = -2.0 * acc.col(m).imag();
  }
  return TrigVector(period, std::move(c), std::move(s));
}

/// Divided differences f[x_0], f[x_0, x_1], ..., f[x_0, ..., x_{N-1}] as rows.
/// Repeated nodes give scaled derivatives. Each harmonic is handled through
/// exp(i m w J) for the bidiagonal node matrix J, whose first row holds the
/// divided differences of the exponential; this stays accurate for close nodes.
inline Eigen::MatrixXd divided_differences(const TrigVector& f, const std::vector<double>& nodes) {
  const int count = static_cast<int>(nodes.size());
  if (count == 0) return Eigen::MatrixXd(0, f.rows());
  double center = 0.0;
  for (double x : nodes) center += x;
  center /= count;
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(count, count);
  for (int k = 0; k < count; ++k) {
    j(k, k) = nodes[static_cast<std::size_t>(k)] - center;
    if (k + 1 < count) j(k, k + 1) = 1.0;
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(count, f.rows());
  out.row(0) = f.cos_coef().col(0).transpose();
  const double w = f.base_frequency();
  for (int m = 1; m <= f.max_index(); ++m) {
    const std::complex<double> iwm(0.0, w * m);
    const Eigen::MatrixXcd e = (iwm * j).exp() * std::exp(iwm * center);
    for (int l = 0; l < count; ++l)
      out.row(l) += (e(0, l).real() * f.cos_coef().col(m) + e(0, l).imag() * f.sin_coef().col(m)).transpose();
  }
  return out;
}

/// Laurent coefficients c_{-M..M} in u = e^{i w t} (index m + M).
inline Eigen::MatrixXcd to_laurent(const TrigVector& f) {
  const int big_m = f.max_index();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(f.rows(), 2 * big_m + 1);
  out.col(big_m) = f.cos_coef().col(0).cast<std::complex<double>>();
  for (int m = 1; m <= big_m; ++m) {
    Eigen::VectorXcd cm(f.rows());
    for (int r = 0; r < f.rows(); ++r) cm[r] = 0.5 * std::complex<double>(f.cos_coef()(r, m), -f.sin_coef()(r, m));
    out.col(big_m + m) = cm;
    out.col(big_m - m) = cm.conjugate();
  }
  return out;
}

/// Inverse of to_laurent; imaginary parts of the real series are discarded.
inline TrigVector from_laurent(const Eigen::MatrixXcd& l, double period) {
  const int big_m = static_cast<int>(l.cols() - 1) / 2;
  Eigen::MatrixXd c(l.rows(), big_m + 1), s(l.rows(), big_m + 1);
  c.col(0) = l.col(big_m).real();
  s.col(0).setZero();
  for (int m = 1; m <= big_m; ++m) {
    const Eigen::VectorXcd avg = 0.5 * (l.col(big_m + m) + l.col(big_m - m).conjugate());
    c.col(m) = 2.0 * avg.real();
    s.col(m) = -2.0 * avg.imag();
  }
  return TrigVector(period, std::move(c), std::move(s));
}

}  // namespace osculant
