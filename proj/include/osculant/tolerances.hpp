#pragma once

namespace osculant {

/// Numerical thresholds shared by all modules. Every threshold is relative to a
/// natural scale (largest singular value, max of |F| over the period, ...).
struct Tolerances {
  /// Singular values below rank * sigma_max count as zero.
  double rank = 1e-9;
  /// |F_p(t)| <= zero * max|F_p| flags a zero of the tangency function.
  double zero = 1e-10;
  /// Derivative j is nonzero when |F^(j)| > multiplicity * max|F^(j)|.
  double multiplicity = 1e-6;
  /// Zeros closer than this (parameter units) are merged into one tangency.
  double merge = 1e-7;
  /// Initial sampling grid per period, doubled on demand up to max_grid.
  int grid = 4096;
  int max_grid = 1 << 20;
};

}  // namespace osculant
