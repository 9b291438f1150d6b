#pragma once

// Number-of-roots machinery: the tangency function F_p(t) = det[gamma(t); ...;
// gamma^(n-1)(t); p], its zeros on one period with multiplicities, and orders of
// tangency decided by osculating-flag membership.

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "osculant/curve.hpp"
#include "osculant/errors.hpp"
#include "osculant/projective.hpp"
#include "osculant/tolerances.hpp"
#include "osculant/trig_series.hpp"

namespace osculant {

struct Tangency {
  double tau = 0.0;
  int order = 1;
};

/// Tangency moments with their orders; total is the number of roots.
struct RootCount {
  std::vector<Tangency> tangencies;
  int total = 0;
};

/// F_p evaluated straight from the jet determinant.
class TangencyFunction {
public:
  TangencyFunction(Curve c, const ProjPoint& p) : curve_(std::move(c)), p_(p.coords()) {
    if (p_.size() != curve_.dim() + 1) throw DomainError("tangency_function: point has the wrong dimension");
  }

  [[nodiscard]] double operator()(double t) const {
    const int n = curve_.dim();
    Eigen::MatrixXd m(n + 1, n + 1);
    m.topRows(n) = curve_.jet(t, n - 1).derivs;
    m.row(n) = p_.transpose();
    return m.partialPivLu().determinant();
  }

  /// d/dt F_p: only the last jet row is differentiated, the other terms repeat a row.
  [[nodiscard]] double derivative(double t) const {
    const int n = curve_.dim();
    const Eigen::MatrixXd j = curve_.jet(t, n).derivs;
    Eigen::MatrixXd m(n + 1, n + 1);
    m.topRows(n - 1) = j.topRows(n - 1);
    m.row(n - 1) = j.row(n);
    m.row(n) = p_.transpose();
    return m.partialPivLu().determinant();
  }

  /// Exact Fourier series of F_p fitted from determinant samples.
  [[nodiscard]] TrigSeries series() const {
    const int n = curve_.dim();
    TrigVector v = fit_trig(
        [this](double t) {
          Eigen::VectorXd out(1);
          out[0] = (*this)(t);
          return out;
        },
        1, curve_.period(), n * curve_.coords().max_index());
    return TrigSeries(v);
  }

private:
  Curve curve_;
  Eigen::VectorXd p_;
};

inline TangencyFunction tangency_function(const Curve& c, const ProjPoint& p) {
  c.require_generic();
  return TangencyFunction(c, p);
}

namespace detail {

inline double periodic_gap(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

inline double wrap_to(double t, double period) {
  double r = std::fmod(t, period);
  if (r < 0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

struct FoundZero {
  double tau;
  int order;
  int raw;  // raw zeros merged into this one
};

class ZeroFinder {
public:
  ZeroFinder(const TrigSeries& f, const Tolerances& tol) : f_(f), tol_(tol) {
    if (f_.parity() < 0) throw DomainError("zero finder: series is not (anti)periodic");
  }

  /// Zeros on [0, P) from grid samples t_k = k P / N. Returns false when the
  /// sign-change parity is inconsistent and a finer grid is needed.
  bool scan(std::span<const double> grid, std::vector<FoundZero>& out) {
    out.clear();
    const int n = static_cast<int>(grid.size());
    const double period = f_.period();
    const double h = period / n;
    const double sigma = f_.parity() == 1 ? -1.0 : 1.0;
    double scale = 0.0;
    for (double v : grid) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw DomainError("tangency function vanishes identically (point annihilated by every osculating hyperplane)");
    scale0_ = scale;
    const double ztol = tol_.zero * scale;
    auto val = [&](int k) {
      if (k < 0) return sigma * grid[static_cast<std::size_t>(k + n)];
      if (k >= n) return sigma * grid[static_cast<std::size_t>(k - n)];
      return grid[static_cast<std::size_t>(k)];
    };
    auto tk = [&](int k) { return period * k / n; };
    std::vector<double> raw;

    for (int k = 0; k < n; ++k) {
      const double a = val(k), b = val(k + 1);
      if (a == 0.0) {
        raw.push_back(tk(k));
        continue;
      }
      if (b != 0.0 && std::signbit(a) != std::signbit(b)) raw.push_back(bracket(0, tk(k), tk(k + 1), a, b));
    }

    const double cutoff = 2.0 * f_.derivative_bound(2) * h * h;
    for (int k = 0; k < n; ++k) {
      const double a = val(k - 1), b = val(k), c = val(k + 1);
      if (a == 0.0 || b == 0.0 || c == 0.0) continue;
      if (std::signbit(a) != std::signbit(b) || std::signbit(b) != std::signbit(c)) continue;
      if (!(std::abs(b) <= std::abs(a) && std::abs(b) < std::abs(c))) continue;
      if (std::abs(b) > cutoff) continue;
      const double lo = tk(k - 1), hi = tk(k + 1);
      double ts;
      const double da = f_(lo, 1), dc = f_(hi, 1);
      if (da != 0.0 && dc != 0.0 && std::signbit(da) != std::signbit(dc)) {
        ts = bracket(1, lo, hi, da, dc);
      } else {
        auto r = boost::math::tools::brent_find_minima([&](double t) { return std::abs(f_(t)); }, lo, hi, 50);
        ts = r.first;
      }
      const double fs = f_(ts);
      if (std::abs(fs) <= ztol) {
        raw.push_back(ts);
      } else if (std::signbit(fs) != std::signbit(b)) {
        raw.push_back(bracket(0, lo, ts, a, fs));
        raw.push_back(bracket(0, ts, hi, fs, c));
      }
    }

    for (double& t : raw) t = wrap_to(t, period);
    std::sort(raw.begin(), raw.end());
    if (raw.empty()) return f_.parity() == 0;

    // Group raw zeros closer than the merge tolerance, or joined by a stretch
    // where F stays below the zero tolerance (a rounding-split multiple zero).
    auto same_zero = [&](double a, double b) {
      const double gap = b - a;
      if (gap <= tol_.merge) return true;
      if (gap > 2.0 * h) return false;
      for (double s : {0.25, 0.5, 0.75})
        if (std::abs(f_(a + s * gap)) > ztol) return false;
      return true;
    };
    std::vector<std::vector<double>> groups;
    for (double t : raw) {
      if (!groups.empty() && same_zero(groups.back().back(), t)) groups.back().push_back(t);
      else groups.push_back({t});
    }
    if (groups.size() > 1 && same_zero(groups.back().back(), groups.front().front() + period)) {
      std::vector<double> joined;
      for (double t : groups.back()) joined.push_back(t - period);
      joined.insert(joined.end(), groups.front().begin(), groups.front().end());
      groups.front() = std::move(joined);
      groups.pop_back();
    }

    std::vector<FoundZero> refined;
    for (const auto& g : groups) {
      const double t0 = 0.5 * (g.front() + g.back());
      auto [m, t] = multiplicity(t0, h);
      refined.push_back({wrap_to(t, period), m, static_cast<int>(g.size())});
    }
    std::sort(refined.begin(), refined.end(), [](const auto& x, const auto& y) { return x.tau < y.tau; });

    // Refinement can pull neighbouring raw zeros onto one point.
    for (const auto& z : refined) {
      if (!out.empty() && periodic_gap(out.back().tau, z.tau, period) <= tol_.merge) {
        out.back().order = std::max(out.back().order, z.order);
        out.back().raw += z.raw;
      } else {
        out.push_back(z);
      }
    }
    if (out.size() > 1 && periodic_gap(out.back().tau, out.front().tau, period) <= tol_.merge) {
      out.front().order = std::max(out.front().order, out.back().order);
      out.front().raw += out.back().raw;
      out.pop_back();
    }

    int odd = 0;
    for (const auto& z : out) odd += z.order % 2;
    return odd % 2 == f_.parity();
  }

  [[nodiscard]] double scale() const { return scale0_; }

private:
  double bracket(int d, double lo, double hi, double flo, double fhi) const {
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve([&](double t) { return f_(t, d); }, lo, hi, flo, fhi,
                                               boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
  }

  double derivative_scale(int j) {
    if (static_cast<int>(scales_.size()) > j && scales_[j] >= 0.0) return scales_[j];
    if (static_cast<int>(scales_.size()) <= j) scales_.resize(j + 1, -1.0);
    const int samples = std::max(64, 16 * (f_.max_index() + 1));
    double best = 0.0;
    for (int k = 0; k < samples; ++k) best = std::max(best, std::abs(f_(f_.period() * k / samples, j)));
    scales_[j] = best;
    return best;
  }

  // Smallest m with |F^(m)| above threshold at the refined zero of F^(m-1).
  std::pair<int, double> multiplicity(double t0, double h) {
    const int cap = std::max(2, std::min(2 * f_.max_index(), 64));
    double t = t0;
    const double w = 2.0 * h;
    for (int m = 1; m <= cap; ++m) {
      if (m > 1) t = refine_derivative_zero(m - 1, t0, w);
      const double dm = std::abs(f_(t, m));
      const double s = derivative_scale(m);
      if (s == 0.0) break;
      if (dm > tol_.multiplicity * s) return {m, t};
    }
    throw PrecisionError("could not resolve the multiplicity of a zero near t = " + std::to_string(t0) +
                         "; perturb the point or raise the resolution");
  }

  double refine_derivative_zero(int j, double t0, double w) const {
    const double lo = t0 - w, hi = t0 + w;
    const double glo = f_(lo, j), ghi = f_(hi, j);
    if (glo != 0.0 && ghi != 0.0 && std::signbit(glo) != std::signbit(ghi)) {
      // Keep the bracket tight around t0 when the derivative changes sign there.
      return bracket(j, lo, hi, glo, ghi);
    }
    std::uintmax_t iters = 200;
    try {
      return boost::math::tools::newton_raphson_iterate(
          [&](double t) { return std::make_pair(f_(t, j), f_(t, j + 1)); }, t0, lo, hi, 50, iters);
    } catch (const boost::math::evaluation_error&) {
      // Flat derivative at a high-order zero: t0 is already the best estimate.
      return t0;
    }
  }

  const TrigSeries& f_;
  Tolerances tol_;
  double scale0_ = 0.0;
  std::vector<double> scales_;
};

inline std::vector<FoundZero> find_zeros(const TrigSeries& f, std::vector<double> grid, const Tolerances& tol) {
  ZeroFinder finder(f, tol);
  std::vector<FoundZero> out;
  int n = static_cast<int>(grid.size());
  while (true) {
    if (finder.scan(grid, out)) return out;
    n *= 2;
    if (n > tol.max_grid)
      throw PrecisionError("zero scan stays inconsistent up to the maximal grid; perturb the point");
    grid = f.sample(n);
  }
}

inline RootCount to_root_count(const std::vector<FoundZero>& zs) {
  RootCount rc;
  for (const auto& z : zs) {
    rc.tangencies.push_back({z.tau, z.order});
    rc.total += z.order;
  }
  return rc;
}

// Largest i with p in L^{n-i}_tau, assuming p in H_tau.
inline int flag_order(const Curve& c, const Eigen::VectorXd& p, double tau, const Tolerances& tol) {
  const int n = c.dim();
  const Jet jet = c.jet(tau, n);
  int order = 1;
  for (int i = 2; i <= n; ++i) {
    if (!osculating_subspace(jet, n - i, tol.rank).contains(p, tol.rank)) break;
    order = i;
  }
  return order;
}

}  // namespace detail

/// Zeros of any (anti)periodic series on one period, counted with multiplicity.
inline RootCount count_zeros(const TrigSeries& f, const Tolerances& tol = {}) {
  return detail::to_root_count(detail::find_zeros(f, f.sample(tol.grid), tol));
}

/// Order of tangency of p at gamma(tau): the largest i with p in the
/// codimension-i osculating subspace at gamma(tau).
inline int order_of_tangency(const Curve& c, const ProjPoint& p, double tau, const Tolerances& tol = {}) {
  if (p.dim() != c.dim()) throw DomainError("order_of_tangency: point has the wrong dimension");
  const TrigSeries f = dot(p.coords(), c.dual());
  const Eigen::VectorXd vals = c.default_dual_table() * p.coords();
  const double scale = vals.cwiseAbs().maxCoeff();
  if (std::abs(f(tau)) > tol.zero * scale)
    throw DomainError("order_of_tangency: point does not lie on the osculating hyperplane at tau");
  return detail::flag_order(c, p.coords(), tau, tol);
}

/// Number of roots #_p(gamma): tangency moments of p with their orders.
inline RootCount count_roots(const Curve& c, const ProjPoint& p, const Tolerances& tol = {}) {
  if (p.dim() != c.dim()) throw DomainError("count_roots: point has the wrong dimension");
  c.require_generic();
  const TrigSeries f = dot(p.coords(), c.dual());
  std::vector<double> grid;
  if (tol.grid == Tolerances{}.grid) {
    const Eigen::VectorXd vals = c.default_dual_table() * p.coords();
    grid.assign(vals.data(), vals.data() + vals.size());
  } else {
    grid = f.sample(tol.grid);
  }
  const auto zeros = detail::find_zeros(f, std::move(grid), tol);
  for (const auto& z : zeros) {
    if (z.raw < 2) continue;
    const int flag = detail::flag_order(c, p.coords(), z.tau, tol);
    if (flag != z.order)
      throw PrecisionError("unresolved zero cluster at t = " + std::to_string(z.tau) + " (derivative order " +
                           std::to_string(z.order) + ", flag order " + std::to_string(flag) +
                           "); perturb the point or raise the resolution");
  }
  return detail::to_root_count(zeros);
}

}  // namespace osculant
