#pragma once

namespace minctrl {

/// Numerical thresholds for the floating backend. The exact backend ignores them.
struct ToleranceConfig {
  /// Relative merge distance for raw eigenvalues, scaled by max(1, spectral radius).
  double eigen_cluster_tol = 1e-8;
  /// Singular values at or below rank_tol * sigma_max count as zero.
  double rank_tol = 1e-10;
  /// Absolute ceiling on imaginary parts that are treated as zero.
  double realness_tol = 1e-9;

  /// Throws Error(kInvalidArgument) if any tolerance is negative or NaN.
  void validate() const;
};

}  // namespace minctrl
