#include "stathyp/sampling.hpp"

#include <cmath>

#include "stathyp/errors.hpp"

namespace stathyp {

void check_shell(const ModelSpace& space, double r, double k) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("radius must be finite and > 0");
  if (!(k >= 0.0) || k > r) throw ParameterError("shell width must satisfy 0 <= k <= r");
  if (!space.is_continuum() && (r != std::round(r) || k != std::round(k)))
    throw ParameterError("tree radii and shell widths must be integers");
}

double visual_shell_mass(double h, double a, double b) {
  if (h == 0.0) return b - a;
  return (std::exp(h * b) - std::exp(h * a)) / h;
}

double sample_shell_radius(double h, double r, double k, StreamRng& rng) {
  if (k == 0.0) return r;
  const double u = rng.uniform();
  if (h == 0.0) return r - k + u * k;
  // Inverse CDF of exp(h s) on [r - k, r], written relative to the top edge
  // so large h r does not overflow.
  const double s = r + std::log1p(-(1.0 - u) * -std::expm1(-h * k)) / h;
  return std::min(r, std::max(r - k, s));
}

namespace {

// Tree shell radius in (r - k, r] (or [0, r] for the ball) weighted by sphere size.
long sample_tree_radius(const ModelSpace& space, long r, long k, StreamRng& rng) {
  if (k == 0) return r;
  const long lo = (k == r) ? 0 : r - k + 1;
  std::vector<double> weights;
  double total = 0.0;
  for (long s = lo; s <= r; ++s) {
    weights.push_back(space.tree_sphere_size(static_cast<int>(s)));
    total += weights.back();
  }
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return lo + static_cast<long>(i);
    u -= weights[i];
  }
  return r;
}

}  // namespace

SpacePoint sample_shell_point(const ModelSpace& space, const SpacePoint& x, double r, double k, StreamRng& rng) {
  if (space.is_continuum()) return space.polar_sample(x, sample_shell_radius(space.growth(), r, k, rng), rng);
  const long s = sample_tree_radius(space, std::lround(r), std::lround(k), rng);
  return space.polar_sample(x, static_cast<double>(s), rng);
}

std::vector<SpacePoint> sample_sphere(const ModelSpace& space, const SpacePoint& x, double r, std::size_t n,
                                      SphereMeasure measure, std::uint64_t seed) {
  if (n < 1) throw ParameterError("sample count must be >= 1");
  if (measure == SphereMeasure::counting && space.is_continuum())
    throw UnsupportedError("counting measure is only defined on trees");
  check_shell(space, r, 0.0);
  space.validate(x);
  // On a regular tree the visual measure and the counting measure coincide.
  std::vector<SpacePoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    StreamRng rng(seed, i);
    out.push_back(sample_shell_point(space, x, r, 0.0, rng));
  }
  return out;
}

std::vector<SpacePoint> sample_annulus(const ModelSpace& space, const SpacePoint& x, double r, double k,
                                       std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("sample count must be >= 1");
  if (!(k > 0.0) || !(k < r)) throw ParameterError("annulus width must satisfy 0 < k < r");
  check_shell(space, r, k);
  space.validate(x);
  std::vector<SpacePoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    StreamRng rng(seed, i);
    out.push_back(sample_shell_point(space, x, r, k, rng));
  }
  return out;
}

}  // namespace stathyp
