#pragma once

#include <cstdint>
#include <vector>

#include "stathyp/model_space.hpp"

namespace stathyp {

enum class SphereMeasure { visual_uniform_direction, counting };

/// n points on the sphere S_r(x). Sample i depends only on (seed, i).
/// Counting measure is only defined on trees.
std::vector<SpacePoint> sample_sphere(const ModelSpace& space, const SpacePoint& x, double r, std::size_t n,
                                      SphereMeasure measure, std::uint64_t seed);

/// n points of the shell B_r(x) \ B_{r-k}(x), 0 < k < r, radius drawn with
/// density proportional to exp(h s) (trees: sphere cardinalities).
std::vector<SpacePoint> sample_annulus(const ModelSpace& space, const SpacePoint& x, double r, double k,
                                       std::size_t n, std::uint64_t seed);

/// One draw from the sphere (k = 0), shell (0 < k < r) or ball (k = r).
SpacePoint sample_shell_point(const ModelSpace& space, const SpacePoint& x, double r, double k, StreamRng& rng);

/// Radius draw for the shell [r - k, r] with density proportional to exp(h s).
double sample_shell_radius(double h, double r, double k, StreamRng& rng);

/// Visual mass of [a, b] under exp(h s) ds, i.e. (e^{hb} - e^{ha}) / h.
double visual_shell_mass(double h, double a, double b);

/// Visual mass of the ball of radius r about the basepoint.
inline double visual_ball_mass(double h, double r) { return visual_shell_mass(h, 0.0, r); }

/// Checks the shell parameters: r > 0 and 0 <= k <= r (integers on trees).
void check_shell(const ModelSpace& space, double r, double k);

}  // namespace stathyp
