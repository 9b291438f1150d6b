#pragma once

// Binary forms f(x1, x2) = sum_j c_j x1^(n-j) x2^j with rational coefficients:
// the exact model of P^n through the rational normal curve. A point p of P^n
// corresponds to the form with c_j = C(n, j) p_j, so that rational_normal(n)
// at theta is the form (cos(theta) x1 + sin(theta) x2)^n and #_p equals the
// number of real roots of the form counted with multiplicity.

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "osculant/errors.hpp"
#include "osculant/projective.hpp"
#include "osculant/rational_poly.hpp"

namespace osculant {

struct BinaryForm {
  int n = 0;
  std::vector<mpq_class> coeffs;  // c_0..c_n

  BinaryForm() = default;
  BinaryForm(int degree, std::vector<mpq_class> c) : n(degree), coeffs(std::move(c)) {
    if (n < 0) throw DomainError("BinaryForm: negative degree");
    if (static_cast<int>(coeffs.size()) != n + 1)
      throw DomainError("BinaryForm: expected " + std::to_string(n + 1) + " coefficients");
    for (auto& q : coeffs) q.canonicalize();
  }

  [[nodiscard]] bool is_zero() const {
    for (const auto& q : coeffs)
      if (q != 0) return false;
    return true;
  }

  /// Multiplicity of the root (x1 : x2) = (1 : 0).
  [[nodiscard]] int infinity_multiplicity() const {
    int e = 0;
    while (e <= n && coeffs[static_cast<std::size_t>(e)] == 0) ++e;
    return e;
  }

  /// Dehomogenization f(x, 1) = sum_j c_j x^(n-j).
  [[nodiscard]] RationalPoly affine() const {
    std::vector<mpq_class> asc(coeffs.rbegin(), coeffs.rend());
    return RationalPoly(std::move(asc));
  }

  /// Degree-n form x2^(n - deg a) * a(x1 / x2) for an affine polynomial a.
  static BinaryForm from_affine(const RationalPoly& a, int n) {
    if (a.degree() > n) throw DomainError("BinaryForm::from_affine: polynomial degree exceeds the form degree");
    std::vector<mpq_class> c(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) c[j] = a.coeff(n - j);
    return BinaryForm(n, std::move(c));
  }

  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
    std::vector<mpq_class> c(static_cast<std::size_t>(a.n + b.n + 1));
    for (int i = 0; i <= a.n; ++i)
      for (int j = 0; j <= b.n; ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    return BinaryForm(a.n + b.n, std::move(c));
  }

  friend bool operator==(const BinaryForm& a, const BinaryForm& b) { return a.n == b.n && a.coeffs == b.coeffs; }

  [[nodiscard]] std::string to_string() const {
    std::string out;
    for (int j = 0; j <= n; ++j) {
      const mpq_class& q = coeffs[j];
      if (q == 0) continue;
      out += out.empty() ? (sgn(q) < 0 ? "-" : "") : (sgn(q) < 0 ? " - " : " + ");
      out += mpq_class(abs(q)).get_str();
      if (n - j > 0) out += "*x1" + (n - j > 1 ? "^" + std::to_string(n - j) : std::string());
      if (j > 0) out += "*x2" + (j > 1 ? "^" + std::to_string(j) : std::string());
    }
    return out.empty() ? "0" : out;
  }
};

/// Two forms are equal up to a nonzero rational scale.
inline bool proportional(const BinaryForm& a, const BinaryForm& b) {
  if (a.n != b.n) return false;
  for (int i = 0; i <= a.n; ++i)
    for (int j = i + 1; j <= a.n; ++j)
      if (a.coeffs[i] * b.coeffs[j] != a.coeffs[j] * b.coeffs[i]) return false;
  return a.is_zero() == b.is_zero();
}

inline void to_json(nlohmann::json& j, const BinaryForm& f) {
  std::vector<std::string> c;
  for (const auto& q : f.coeffs) c.push_back(q.get_str());
  j = nlohmann::json{{"n", f.n}, {"coeffs", c}};
}

inline void from_json(const nlohmann::json& j, BinaryForm& f) {
  if (!j.is_object() || !j.contains("n") || !j.contains("coeffs"))
    throw DomainError("BinaryForm JSON needs \"n\" and \"coeffs\"");
  const int n = j.at("n").get<int>();
  std::vector<mpq_class> c;
  for (const auto& v : j.at("coeffs")) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw DomainError("BinaryForm JSON: cannot parse coefficient \"" + s + "\"");
    if (q.get_den() == 0) throw DomainError("BinaryForm JSON: zero denominator in \"" + s + "\"");
    c.push_back(q);
  }
  f = BinaryForm(n, std::move(c));
}

inline mpz_class binomial(int n, int k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

/// Continued-fraction convergent of v within tol.
inline mpq_class rational_approximation(double v, double tol) {
  if (!std::isfinite(v)) throw DomainError("rational_approximation: non-finite value");
  const mpq_class target(v);
  mpq_class x = target;
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 200; ++iter) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    mpz_class h2 = a * h1 + h0, k2 = a * k1 + k0;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    mpq_class conv(h1, k1);
    conv.canonicalize();
    if (abs(conv - target) <= tol) return conv;
    x -= a;
    if (x == 0) return conv;
    x = 1 / x;
  }
  return target;
}

/// Binary form of p: coordinates are rationalized within 1e-12 relative to the
/// largest one, then scaled by binomial coefficients.
inline BinaryForm point_to_form(const ProjPoint& p, int n) {
  if (p.dim() != n) throw DomainError("point_to_form: point has " + std::to_string(p.dim() + 1) + " coordinates, expected " + std::to_string(n + 1));
  const double peak = p.coords().cwiseAbs().maxCoeff();
  std::vector<mpq_class> c;
  for (int j = 0; j <= n; ++j) c.push_back(binomial(n, j) * rational_approximation(p[j] / peak, 1e-12));
  return BinaryForm(n, std::move(c));
}

/// Exact variant for rational homogeneous coordinates.
inline BinaryForm point_to_form(const std::vector<mpq_class>& p) {
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<mpq_class> c;
  for (int j = 0; j <= n; ++j) c.push_back(binomial(n, j) * p[j]);
  return BinaryForm(n, std::move(c));
}

inline ProjPoint form_to_point(const BinaryForm& f) {
  Eigen::VectorXd p(f.n + 1);
  for (int j = 0; j <= f.n; ++j) p[j] = mpq_class(f.coeffs[j] / binomial(f.n, j)).get_d();
  return ProjPoint(p);
}

/// Number of real projective roots, with or without multiplicity.
inline int sturm_count(const BinaryForm& f, bool with_multiplicity) {
  if (f.is_zero()) throw DomainError("sturm_count: zero form");
  const int e = f.infinity_multiplicity();
  int total = with_multiplicity ? e : (e > 0 ? 1 : 0);
  const RationalPoly a = f.affine();
  if (a.degree() < 1) return total;
  const auto parts = square_free_decomposition(a);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const int r = count_real_roots(parts[i]);
    total += with_multiplicity ? static_cast<int>(i + 1) * r : r;
  }
  return total;
}

/// A real root as a parameter of rational_normal(n): the form vanishes at
/// (x1 : x2) = (-sin theta : cos theta), theta in [0, pi).
struct FormRoot {
  double theta = 0.0;
  int multiplicity = 1;
};

inline double root_to_theta(double x) {
  double t = -std::atan(x);
  if (t < 0) t += std::numbers::pi;
  return t;
}

inline std::vector<FormRoot> real_roots(const BinaryForm& f) {
  if (f.is_zero()) throw DomainError("real_roots: zero form");
  std::vector<FormRoot> out;
  if (const int e = f.infinity_multiplicity(); e > 0) out.push_back({std::numbers::pi / 2, e});
  const RationalPoly a = f.affine();
  if (a.degree() < 1) return out;
  const auto parts = square_free_decomposition(a);
  const mpq_class width = mpq_class(1, 1) / mpq_class(mpz_class(1) << 60);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (const auto& iv : isolate_real_roots(parts[i], width))
      out.push_back({root_to_theta(mpq_class((iv.lo + iv.hi) / 2).get_d()), static_cast<int>(i + 1)});
  return out;
}

struct BinaryFactorization {
  BinaryForm real_rooted;  // every root real
  BinaryForm positive;     // no real roots, positive definite
};

namespace detail {

// Rational factor of the square-free polynomial a collecting all its real roots,
// found by rounding L * prod(x - r) to integers and confirming exact division.
inline RationalPoly real_part_of_square_free(const RationalPoly& a) {
  const int real = count_real_roots(a);
  if (real == 0) return RationalPoly::constant(1);
  if (real == a.degree()) return a.monic();
  const RationalPoly prim = a.primitive();
  const mpz_class lead = prim.leading().get_num();
  for (int bits = 64; bits <= 1024; bits *= 2) {
    const mpq_class width = mpq_class(1) / mpq_class(mpz_class(1) << bits);
    RationalPoly prod = RationalPoly::constant(mpq_class(lead));
    for (const auto& iv : isolate_real_roots(a, width)) prod = prod * RationalPoly::linear_root((iv.lo + iv.hi) / 2);
    std::vector<mpq_class> rounded;
    for (const auto& q : prod.coeffs()) {
      mpz_class r;
      mpq_class shifted = q + mpq_class(1, 2);
      mpz_fdiv_q(r.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
      rounded.emplace_back(r);
    }
    const RationalPoly cand(std::move(rounded));
    if (cand.degree() == real && prim.divmod(cand).second.is_zero()) return cand.monic();
  }
  throw PrecisionError("factor_binary_form: the real roots of " + a.to_string() +
                       " do not split off over the rationals");
}

}  // namespace detail

/// f = real_rooted * positive with exact rational coefficients. Throws
/// PrecisionError when the real-rooted factor is not defined over Q.
inline BinaryFactorization factor_binary_form(const BinaryForm& f) {
  if (f.is_zero()) throw DomainError("factor_binary_form: zero form");
  const int e = f.infinity_multiplicity();
  const RationalPoly a = f.affine();
  RationalPoly real = RationalPoly::constant(a.leading());
  RationalPoly pos = RationalPoly::constant(1);
  const auto parts = square_free_decomposition(a);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const RationalPoly r = detail::real_part_of_square_free(parts[i]);
    const RationalPoly q = exact_divide(parts[i], r);
    for (std::size_t k = 0; k <= i; ++k) {
      real = real * r;
      pos = pos * q;
    }
  }
  const int deg_real = real.degree() + e;
  BinaryFactorization out{BinaryForm::from_affine(real, deg_real), BinaryForm::from_affine(pos, f.n - deg_real)};
  if (!(out.real_rooted * out.positive == f))
    throw PrecisionError("factor_binary_form: recombination failed for " + f.to_string());
  return out;
}

}  // namespace osculant
