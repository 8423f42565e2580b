#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stathyp/model_space.hpp"
#include "stathyp/net.hpp"
#include "stathyp/numeric.hpp"

namespace stathyp {

/// Monte Carlo outcome. shell_width is 0 for spheres.
struct EstimateResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_pairs = 0;
  double radius = 0.0;
  double shell_width = 0.0;
  std::uint64_t seed = 0;
  std::string config_digest;
};

/// 64-bit FNV-1a of a canonical description, as 16 hex digits.
std::string digest(const std::string& canonical);

/// Mean of d(y, z) / r over n independent pairs drawn from the sphere (k = 0),
/// the shell B_r \ B_{r-k} (0 < k < r) or the ball (k = r). On trees the
/// diagonal y = z is kept, as the product of atomic measures has it.
EstimateResult estimate_E(const ModelSpace& space, const SpacePoint& x, double r, double k, std::size_t n,
                          std::uint64_t seed, int workers = 1);

/// Fraction of [0, d(x,y)] that the geodesic from x to y spends in the thick
/// part, by left-endpoint quadrature on the grid 0, dt, 2dt, ...; the last
/// partial step is weighted by its length.
double thick_stat(const ModelSpace& space, const SpacePoint& x, const SpacePoint& y, double eps, double dt);

/// thick_stat for the ray of the given length leaving x in direction
/// `angle`; usable for rays far longer than an endpoint could represent.
double ray_thick_stat(const ModelSpace& space, const SpacePoint& x, double angle, double length, double eps,
                      double dt);

/// Fraction of n shell points y whose ray keeps thick_stat(x, y_t) >= theta
/// at every grid time t in [sigma r, r].
EstimateResult p1_fraction(const ModelSpace& space, const SpacePoint& x, double r, double k, double eps,
                           double theta, double sigma, std::size_t n, double dt, std::uint64_t seed,
                           int workers = 1);

/// Longest run of consecutive thick grid samples, in time units.
double longest_thick_run(const std::vector<bool>& flags, double dt);

struct SeparationResult {
  /// Headline estimate: the orbit-integrated fraction when available,
  /// otherwise the raw pair count.
  EstimateResult fraction;
  /// Fraction of sampled pairs with d(y_t, z_t) < M0.
  EstimateResult raw;
  /// True when each sampled y was integrated against the full circle of
  /// directions (rotation-symmetric planar models).
  bool orbit_integrated = false;
};

/// Fellow-traveling fraction at time t for pairs from the shell of radius r
/// (k = 0: sphere).
SeparationResult separation_fraction(const ModelSpace& space, const SpacePoint& x, double r, double t, double m0,
                                     std::size_t n, std::uint64_t seed, int workers = 1, double k = 0.0);

/// Fraction of directions whose time-t point stays within m0 of the time-t
/// point in direction `angle` (rotation-symmetric planar models).
double orbit_fraction(const ModelSpace& space, const SpacePoint& x, double angle, double t, double m0);

struct ProbeResult {
  bool hit = false;
  /// Upper bound on the true minimum, off by at most ds.
  double min_distance = 0.0;
};

/// Distance from the sub-interval [s1, s2] of [x, y] to [x, z] U [y, z], on
/// grids of step ds; hit iff the minimum is <= C. On continuum models each
/// side minimum is refined between neighbouring grid points, so the reported
/// value is an attained distance within ds of the true minimum.
ProbeResult thin_triangle_probe(const ModelSpace& space, const SpacePoint& x, const SpacePoint& y,
                                const SpacePoint& z, double s1, double s2, double c, double ds);

/// Fraction of the interval grid within C of the other two sides.
double near_fraction(const ModelSpace& space, const SpacePoint& x, const SpacePoint& y, const SpacePoint& z,
                     double s1, double s2, double c, double ds);

/// Default probe step min(0.05, C / 20) (0.05 when C = 0).
double default_probe_step(double c);

/// Grid 0, ds, 2ds, ..., plus the endpoint, along [u, v] between times a and b.
std::vector<SpacePoint> segment_grid(const ModelSpace& space, const SpacePoint& u, const SpacePoint& v, double a,
                                     double b, double ds);

/// Nearest-net-point discretization of a geodesic.
struct SamplePath {
  std::vector<SpacePoint> points;
  std::vector<std::size_t> net_indices;
  std::vector<SpacePoint> marks;
  std::vector<double> mark_times;
  double tau = 0.0;
  double c = 0.0;
};

/// Marks [x, y] at spacing tau - 2 * covering_radius (tau - 2c for a c-dense
/// net) plus the endpoint, and snaps each mark to its nearest net point.
/// Requires tau > 4c. Throws CoverageError if a mark is farther than the
/// net's covering radius from every net point.
SamplePath discretize_geodesic(const ModelSpace& space, const Net& net, double tau, const SpacePoint& x,
                               const SpacePoint& y);

/// Large-sample value of estimate_E on a sphere where it is known in closed
/// form or by quadrature: 4/pi on the euclidean plane, the angle integral
/// (1/pi) int_0^pi 2 asinh(sinh r sin(a/2)) / r da on the hyperbolic plane,
/// and the prefix-length sum on trees. Empty for other models.
std::optional<double> reference_sphere_E(const ModelSpace& space, double r);

/// Normalized hyperbolic area of {Im z <= 1/eps^2} inside the standard
/// fundamental domain, by quadrature over Re z in [-1/2, 1/2].
double thick_area_fraction(double eps);

/// Exponential vs power-law fits of a decaying positive sequence.
struct DecayFit {
  LineFit exponential;  // log f against t
  LineFit power;        // log f against log t
};

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& fractions);

}  // namespace stathyp
