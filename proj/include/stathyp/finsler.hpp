#pragma once

#include <cstdint>

#include "stathyp/convex_body.hpp"
#include "stathyp/rng.hpp"

namespace stathyp {

/// Volume of the euclidean unit ball in R^n.
double unit_ball_volume(int n);

struct VolumeMethod {
  enum class Kind { exact, monte_carlo };
  Kind kind = Kind::exact;
  std::uint64_t seed = 0;
  /// Sampling stops once the relative standard error drops below this...
  double target_rel_error = 1e-3;
  /// ...or this many points have been drawn.
  std::size_t max_samples = 20'000'000;

  static VolumeMethod exact() { return {}; }
  static VolumeMethod monte_carlo(std::uint64_t seed, double target_rel_error = 1e-3,
                                  std::size_t max_samples = 20'000'000) {
    return {Kind::monte_carlo, seed, target_rel_error, max_samples};
  }
};

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;  // 0 for exact evaluations
};

/// Lebesgue volume. Exact for polytopes (n <= 3), ellipsoids and l^p balls;
/// Monte Carlo uses rejection sampling in the support-function bounding box.
VolumeEstimate volume(const ConvexBody& body, const VolumeMethod& method);

/// Polar body {xi : xi . v <= 1 for all v in body}.
ConvexBody polar(const ConvexBody& body);

/// Volume of the polar body. Exact polytopes go through the dual vertex set.
VolumeEstimate polar_volume(const ConvexBody& body, const VolumeMethod& method);

struct MahlerReport {
  double value = 0.0;
  double std_error = 0.0;
  double lower = 0.0;  // eps_n^2 / n^{n/2}
  double upper = 0.0;  // eps_n^2
  bool lower_ok = true;
  bool upper_ok = true;
  bool ok() const { return lower_ok && upper_ok; }
};

/// Mahler volume vol(body) * vol(polar body) with a bound check that only
/// flags violations beyond three standard errors (relative 1e-12 for exact).
MahlerReport mahler(const ConvexBody& body, const VolumeMethod& method);

/// Busemann density eps_n / vol(B) with its standard error.
VolumeEstimate busemann_density(const ConvexBody& body, const VolumeMethod& method);
/// Holmes-Thompson density vol(B polar) / eps_n with its standard error.
VolumeEstimate holmes_thompson_density(const ConvexBody& body, const VolumeMethod& method);

struct DensityPair {
  double busemann = 0.0;
  double busemann_error = 0.0;
  double holmes_thompson = 0.0;
  double holmes_thompson_error = 0.0;
  double ratio = 0.0;
  double ratio_error = 0.0;
};

DensityPair densities(const ConvexBody& body, const VolumeMethod& method);

/// Symmetrized convex hull of k uniform points on the unit sphere of R^n,
/// k drawn uniformly from [4, 40].
ConvexBody random_symmetric_polytope(int n, StreamRng& rng);

/// Ellipsoid with log-uniform semi-axes in [0.2, 5].
ConvexBody random_ellipsoid(int n, StreamRng& rng);

}  // namespace stathyp
