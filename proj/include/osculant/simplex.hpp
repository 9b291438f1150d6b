#pragma once

// Dense two-phase simplex method for small linear programs
//   maximize c.x  subject to  A x <= b,
// with free or nonnegative variables. Bland's rule prevents cycling.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "osculant/errors.hpp"

namespace osculant {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

namespace detail {

// Tableau in the layout of the classical dictionary method: rows 0..m-1 are
// constraints with the right-hand side in the last column, row m is the
// objective, row m+1 the phase-one objective.
class SimplexTableau {
public:
  SimplexTableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c, double eps)
      : m_(static_cast<int>(a.rows())), n_(static_cast<int>(a.cols())), eps_(eps), d_(m_ + 2, n_ + 2),
        basic_(m_), nonbasic_(n_ + 1) {
    d_.setZero();
    d_.topLeftCorner(m_, n_) = a;
    for (int i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      d_(i, n_) = -1.0;
      d_(i, n_ + 1) = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_(m_, j) = -c[j];
    }
    nonbasic_[n_] = -1;
    d_(m_ + 1, n_) = 1.0;
  }

  LpResult solve() {
    LpResult out;
    out.x = Eigen::VectorXd::Zero(n_);
    int r = 0;
    for (int i = 1; i < m_; ++i)
      if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
    if (m_ > 0 && d_(r, n_ + 1) < -eps_) {
      pivot(r, n_);
      if (!run(1) || d_(m_ + 1, n_ + 1) < -eps_) {
        out.status = LpStatus::infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i)
        if (basic_[i] == -1) {
          int s = -1;
          for (int j = 0; j <= n_; ++j)
            if (s == -1 || d_(i, j) < d_(i, s) || (d_(i, j) == d_(i, s) && nonbasic_[j] < nonbasic_[s])) s = j;
          pivot(i, s);
        }
    }
    if (!run(0)) {
      out.status = LpStatus::unbounded;
      return out;
    }
    for (int i = 0; i < m_; ++i)
      if (basic_[i] >= 0 && basic_[i] < n_) out.x[basic_[i]] = d_(i, n_ + 1);
    out.value = d_(m_, n_ + 1);
    out.status = LpStatus::optimal;
    return out;
  }

private:
  void pivot(int r, int s) {
    const double inv = 1.0 / d_(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = d_(i, s) * inv;
      if (f == 0.0) continue;
      for (int j = 0; j < n_ + 2; ++j)
        if (j != s) d_(i, j) -= d_(r, j) * f;
      d_(i, s) = -f;
    }
    for (int j = 0; j < n_ + 2; ++j)
      if (j != s) d_(r, j) *= inv;
    d_(r, s) = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // phase 1 optimizes the auxiliary row; returns false when unbounded.
  bool run(int phase) {
    const int x = phase == 1 ? m_ + 1 : m_;
    for (int iter = 0; iter < 50000; ++iter) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (phase == 0 && nonbasic_[j] == -1) continue;
        if (d_(x, j) < -eps_ && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
      }
      if (s == -1) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_(i, s) < eps_) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = d_(i, n_ + 1) / d_(i, s), rhs = d_(r, n_ + 1) / d_(r, s);
        if (lhs < rhs - eps_ || (std::abs(lhs - rhs) <= eps_ && basic_[i] < basic_[r])) r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
    throw PrecisionError("simplex: iteration limit reached");
  }

  int m_, n_;
  double eps_;
  Eigen::MatrixXd d_;
  std::vector<int> basic_, nonbasic_;
};

}  // namespace detail

/// maximize c.x subject to A x <= b and x >= 0.
inline LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                         double eps = 1e-11) {
  if (a.rows() != b.size() || a.cols() != c.size()) throw DomainError("solve_lp: inconsistent dimensions");
  return detail::SimplexTableau(a, b, c, eps).solve();
}

/// maximize c.x subject to A x <= b with every variable free.
inline LpResult solve_lp_free(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                              double eps = 1e-11) {
  const Eigen::Index n = a.cols();
  Eigen::MatrixXd split(a.rows(), 2 * n);
  split << a, -a;
  Eigen::VectorXd cc(2 * n);
  cc << c, -c;
  LpResult r = solve_lp(split, b, cc, eps);
  if (r.status == LpStatus::optimal) r.x = Eigen::VectorXd(r.x.head(n) - r.x.tail(n));
  else r.x = Eigen::VectorXd::Zero(n);
  return r;
}

}  // namespace osculant
