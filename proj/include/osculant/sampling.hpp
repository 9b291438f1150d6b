#pragma once

#include <Eigen/Dense>

#include <random>

#include "osculant/projective.hpp"

namespace osculant {

/// Rotation-invariant random point of P^n: a normalized Gaussian vector.
inline ProjPoint random_point(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = g(rng);
  return ProjPoint(v);
}

}  // namespace osculant
