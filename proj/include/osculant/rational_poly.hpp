#pragma once

// Univariate polynomials over Q (GMP rationals) with the exact algorithms used
// by the binary-form oracle: division, gcd, square-free decomposition, Sturm
// chains and real-root isolation by bisection.

#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "osculant/errors.hpp"

namespace osculant {

/// Coefficients in ascending degree; the zero polynomial has no coefficients.
class RationalPoly {
public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
    for (auto& q : c_) q.canonicalize();
    trim();
  }

  static RationalPoly constant(const mpq_class& a) { return RationalPoly({a}); }
  /// x - r
  static RationalPoly linear_root(const mpq_class& r) { return RationalPoly({-r, mpq_class(1)}); }

  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] const std::vector<mpq_class>& coeffs() const { return c_; }
  [[nodiscard]] mpq_class coeff(int k) const {
    return (k >= 0 && k <= degree()) ? c_[static_cast<std::size_t>(k)] : mpq_class(0);
  }
  [[nodiscard]] const mpq_class& leading() const { return c_.back(); }

  [[nodiscard]] mpq_class operator()(const mpq_class& x) const {
    mpq_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  [[nodiscard]] int sign_at(const mpq_class& x) const { return sgn((*this)(x)); }

  [[nodiscard]] RationalPoly derivative() const {
    std::vector<mpq_class> d;
    for (int k = 1; k <= degree(); ++k) d.push_back(c_[static_cast<std::size_t>(k)] * k);
    return RationalPoly(std::move(d));
  }

  [[nodiscard]] RationalPoly monic() const {
    if (is_zero()) return *this;
    std::vector<mpq_class> m(c_);
    const mpq_class lc = leading();
    for (auto& q : m) q /= lc;
    return RationalPoly(std::move(m));
  }

  /// Scalar multiple with coprime integer coefficients and positive leading coefficient.
  [[nodiscard]] RationalPoly primitive() const {
    if (is_zero()) return *this;
    mpz_class den = 1, num = 0;
    for (const auto& q : c_) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    }
    std::vector<mpz_class> ints;
    for (const auto& q : c_) {
      mpz_class v = q.get_num() * (den / q.get_den());
      ints.push_back(v);
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), v.get_mpz_t());
    }
    if (sgn(ints.back()) < 0) num = -num;
    std::vector<mpq_class> out;
    for (const auto& v : ints) out.emplace_back(v / num);
    return RationalPoly(std::move(out));
  }

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    std::vector<mpq_class> out(static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1));
    for (int k = 0; k <= a.degree(); ++k) out[k] += a.c_[k];
    for (int k = 0; k <= b.degree(); ++k) out[k] += b.c_[k];
    return RationalPoly(std::move(out));
  }

  friend RationalPoly operator-(const RationalPoly& a) {
    std::vector<mpq_class> out(a.c_);
    for (auto& q : out) q = -q;
    return RationalPoly(std::move(out));
  }

  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) { return a + (-b); }

  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> out(static_cast<std::size_t>(a.degree() + b.degree() + 1));
    for (int i = 0; i <= a.degree(); ++i)
      for (int j = 0; j <= b.degree(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return RationalPoly(std::move(out));
  }

  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder of Euclidean division.
  [[nodiscard]] std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& d) const {
    if (d.is_zero()) throw DomainError("RationalPoly: division by the zero polynomial");
    if (degree() < d.degree()) return {RationalPoly{}, *this};
    std::vector<mpq_class> rem(c_);
    std::vector<mpq_class> quo(static_cast<std::size_t>(degree() - d.degree() + 1));
    const mpq_class lc = d.leading();
    for (int k = degree(); k >= d.degree(); --k) {
      const mpq_class f = rem[k] / lc;
      if (f == 0) continue;
      quo[k - d.degree()] = f;
      for (int j = 0; j <= d.degree(); ++j) rem[k - d.degree() + j] -= f * d.c_[j];
    }
    rem.resize(static_cast<std::size_t>(d.degree()));
    return {RationalPoly(std::move(quo)), RationalPoly(std::move(rem))};
  }

  [[nodiscard]] std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      const mpq_class& q = c_[k];
      if (q == 0) continue;
      if (!out.empty()) out += sgn(q) < 0 ? " - " : " + ";
      else if (sgn(q) < 0) out += "-";
      const mpq_class a = abs(q);
      if (a != 1 || k == 0) out += a.get_str() + (k > 0 ? "*" : "");
      if (k > 0) out += var + (k > 1 ? "^" + std::to_string(k) : "");
    }
    return out;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<mpq_class> c_;
};

/// Monic greatest common divisor (zero if both are zero).
inline RationalPoly gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Exact quotient; throws when the division leaves a remainder.
inline RationalPoly exact_divide(const RationalPoly& a, const RationalPoly& b) {
  auto [q, r] = a.divmod(b);
  if (!r.is_zero()) throw DomainError("exact_divide: nonzero remainder");
  return q;
}

/// Yun's square-free decomposition of a nonconstant f: monic a_1, a_2, ...
/// with f = lc(f) * prod a_i^i, each a_i square-free and pairwise coprime.
inline std::vector<RationalPoly> square_free_decomposition(const RationalPoly& f) {
  std::vector<RationalPoly> out;
  if (f.degree() < 1) return out;
  const RationalPoly fm = f.monic();
  const RationalPoly d = fm.derivative();
  RationalPoly a = gcd(fm, d);
  RationalPoly b = exact_divide(fm, a);
  RationalPoly c = exact_divide(d, a);
  RationalPoly e = c - b.derivative();
  while (b.degree() > 0) {
    RationalPoly g = gcd(b, e);
    out.push_back(g);
    b = exact_divide(b, g);
    c = exact_divide(e, g);
    e = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

/// Sturm chain f, f', -rem(f, f'), ...
inline std::vector<RationalPoly> sturm_chain(const RationalPoly& f) {
  std::vector<RationalPoly> chain{f, f.derivative()};
  while (!chain.back().is_zero()) {
    const auto r = chain[chain.size() - 2].divmod(chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  if (chain.back().is_zero()) chain.pop_back();
  return chain;
}

namespace detail {

inline int sign_variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

inline int variations_at(const std::vector<RationalPoly>& chain, const mpq_class& x) {
  std::vector<int> s;
  for (const auto& p : chain) s.push_back(p.sign_at(x));
  return sign_variations(s);
}

// Sign variations at +infinity (dir = 1) or -infinity (dir = -1).
inline int variations_at_infinity(const std::vector<RationalPoly>& chain, int dir) {
  std::vector<int> s;
  for (const auto& p : chain) {
    int sg = sgn(p.leading());
    if (dir < 0 && p.degree() % 2 == 1) sg = -sg;
    s.push_back(sg);
  }
  return sign_variations(s);
}

}  // namespace detail

/// Number of distinct real roots of a nonzero polynomial.
inline int count_real_roots(const RationalPoly& f) {
  if (f.is_zero()) throw DomainError("count_real_roots: zero polynomial");
  if (f.degree() == 0) return 0;
  const auto chain = sturm_chain(f);
  return detail::variations_at_infinity(chain, -1) - detail::variations_at_infinity(chain, 1);
}

/// Distinct real roots in the half-open interval (a, b].
inline int count_real_roots(const std::vector<RationalPoly>& chain, const mpq_class& a, const mpq_class& b) {
  return detail::variations_at(chain, a) - detail::variations_at(chain, b);
}

/// Isolating interval [lo, hi] containing exactly one real root; exact when lo == hi.
struct RootInterval {
  mpq_class lo;
  mpq_class hi;
};

/// Isolates the real roots of a square-free polynomial in increasing order and
/// refines each interval below the given width.
inline std::vector<RootInterval> isolate_real_roots(const RationalPoly& f, const mpq_class& width) {
  std::vector<RootInterval> out;
  if (f.degree() < 1) return out;
  const auto chain = sturm_chain(f);
  // Cauchy bound: every root has |x| < 1 + max |a_k / a_n|.
  mpq_class bound = 0;
  for (int k = 0; k < f.degree(); ++k) bound = std::max(bound, mpq_class(abs(f.coeff(k) / f.leading())));
  bound += 1;

  std::vector<RootInterval> work{{-bound, bound}};
  while (!work.empty()) {
    RootInterval iv = work.back();
    work.pop_back();
    const int n = count_real_roots(chain, iv.lo, iv.hi);
    if (n == 0) continue;
    if (n == 1) {
      if (f.sign_at(iv.hi) == 0) {
        out.push_back({iv.hi, iv.hi});
        continue;
      }
      // Bisect on the sign of f; the open interval (lo, hi) holds the root.
      while (iv.hi - iv.lo > width) {
        mpq_class mid = (iv.lo + iv.hi) / 2;
        const int sm = f.sign_at(mid);
        if (sm == 0) {
          iv = {mid, mid};
          break;
        }
        if (f.sign_at(iv.lo) != 0 && sm == f.sign_at(iv.lo)) iv.lo = mid;
        else if (count_real_roots(chain, iv.lo, mid) == 1) iv.hi = mid;
        else iv.lo = mid;
      }
      out.push_back(iv);
      continue;
    }
    const mpq_class mid = (iv.lo + iv.hi) / 2;
    work.push_back({iv.lo, mid});
    work.push_back({mid, iv.hi});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  return out;
}

}  // namespace osculant
