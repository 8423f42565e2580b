#include "stathyp/net.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "stathyp/errors.hpp"

namespace stathyp {

namespace {

// Splits a flat coordinate vector into sup-product factor blocks.
SpacePoint assemble(const ModelSpace& space, const RealVector& flat) {
  if (space.kind() == SpaceKind::euclidean) return flat;
  std::vector<SpacePoint> parts;
  std::size_t at = 0;
  for (const auto& f : space.factors()) {
    const auto n = static_cast<std::size_t>(f.dimension());
    parts.emplace_back(RealVector(flat.begin() + static_cast<long>(at), flat.begin() + static_cast<long>(at + n)));
    at += n;
  }
  return parts;
}

bool box_space(const ModelSpace& space) {
  if (space.kind() == SpaceKind::euclidean) return true;
  if (space.kind() != SpaceKind::sup_product) return false;
  for (const auto& f : space.factors())
    if (f.kind() != SpaceKind::euclidean) return false;
  return true;
}

void check_region(const ModelSpace& space, const Region& region) {
  if (const auto* box = std::get_if<BoxRegion>(&region)) {
    if (!box_space(space)) throw ParameterError("box regions need euclidean coordinates");
    const auto n = static_cast<std::size_t>(space.dimension());
    if (box->lower.size() != n || box->upper.size() != n)
      throw ParameterError("box region dimension does not match the space");
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(box->lower[i]) || !std::isfinite(box->upper[i]) || box->lower[i] > box->upper[i])
        throw ParameterError("region must be bounded (finite box with lower <= upper)");
    return;
  }
  const auto& ball = std::get<BallRegion>(region);
  if (!std::isfinite(ball.radius) || ball.radius < 0.0)
    throw ParameterError("region must be bounded (finite ball radius >= 0)");
  space.validate(ball.center);
  if (space.kind() == SpaceKind::sup_product) throw UnsupportedError("ball regions are not supported on sup-products");
}

// Regular grid over a box with per-axis spacing at most `step`, including both faces.
std::vector<SpacePoint> box_grid(const ModelSpace& space, const BoxRegion& box, double step) {
  const std::size_t n = box.lower.size();
  std::vector<std::size_t> counts(n);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double len = box.upper[i] - box.lower[i];
    counts[i] = len == 0.0 ? 1 : static_cast<std::size_t>(std::ceil(len / step)) + 1;
    total *= counts[i];
    if (total > 50'000'000) throw ParameterError("region grid too fine; increase the spacing");
  }
  std::vector<SpacePoint> out;
  out.reserve(total);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    RealVector coords(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double len = box.upper[i] - box.lower[i];
      coords[i] = counts[i] == 1 ? box.lower[i]
                                 : box.lower[i] + len * static_cast<double>(idx[i]) / static_cast<double>(counts[i] - 1);
    }
    out.push_back(assemble(space, coords));
    for (std::size_t i = 0; i < n; ++i) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
    }
  }
  return out;
}

// Polar grid on a hyperbolic or euclidean-plane ball: every ball point is
// within `step` of a grid point (radial half-gap plus half an arc).
std::vector<SpacePoint> polar_grid(const ModelSpace& space, const BallRegion& ball, double step) {
  std::vector<SpacePoint> out{ball.center};
  if (ball.radius == 0.0) return out;
  const auto rings = static_cast<std::size_t>(std::ceil(ball.radius / step));
  const bool hyperbolic = space.kind() != SpaceKind::euclidean;
  for (std::size_t j = 1; j <= rings; ++j) {
    const double rho = ball.radius * static_cast<double>(j) / static_cast<double>(rings);
    const double circumference = 2.0 * std::numbers::pi * (hyperbolic ? std::sinh(rho) : rho);
    const auto m = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(circumference / step)));
    for (std::size_t a = 0; a < m; ++a)
      out.push_back(space.polar_point(ball.center, 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(m), rho));
  }
  return out;
}

std::vector<SpacePoint> tree_ball(const ModelSpace& space, const BallRegion& ball) {
  const long radius = static_cast<long>(std::floor(ball.radius + 1e-9));
  std::vector<SpacePoint> out{ball.center};
  std::vector<std::pair<TreeAddress, TreeAddress>> frontier{{ball.center.address(), std::string(1, '\0')}};
  for (long s = 1; s <= radius; ++s) {
    std::vector<std::pair<TreeAddress, TreeAddress>> next;
    for (const auto& [w, from] : frontier) {
      std::vector<TreeAddress> nb;
      if (!w.empty()) nb.push_back(w.substr(0, w.size() - 1));
      for (int i = 0; i < space.valence(); ++i)
        if (w.empty() || w.back() != tree_letter(i)) nb.push_back(w + tree_letter(i));
      for (auto& v : nb) {
        if (v == from) continue;
        out.emplace_back(v);
        next.emplace_back(v, w);
      }
    }
    frontier = std::move(next);
    if (out.size() > 2'000'000) throw ParameterError("tree ball too large");
  }
  return out;
}

}  // namespace

std::vector<SpacePoint> region_grid(const ModelSpace& space, const Region& region, double step) {
  if (!(step > 0.0)) throw ParameterError("grid step must be > 0");
  check_region(space, region);
  if (const auto* box = std::get_if<BoxRegion>(&region)) return box_grid(space, *box, step);
  const auto& ball = std::get<BallRegion>(region);
  if (space.kind() == SpaceKind::regular_tree) return tree_ball(space, ball);
  if (space.planar_rotation_symmetric()) return polar_grid(space, ball, step);
  if (space.kind() == SpaceKind::euclidean) {
    // Box grid clipped to the ball.
    BoxRegion box{ball.center.vector(), ball.center.vector()};
    for (auto& x : box.lower) x -= ball.radius;
    for (auto& x : box.upper) x += ball.radius;
    std::vector<SpacePoint> out;
    const double slack = step * std::pow(static_cast<double>(space.dimension()), 1.0 / std::min(space.norm_exponent(), 1e9));
    for (auto& p : box_grid(space, box, step))
      if (space.distance(p, ball.center) <= ball.radius + slack) out.push_back(std::move(p));
    return out;
  }
  throw UnsupportedError("no grid construction for this region and model");
}

Net build_net(const ModelSpace& space, const Region& region, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("net separation must be finite and > 0");
  check_region(space, region);

  // Candidate spacing chosen so every region point is within c/2 of a
  // candidate; a maximal c-separated candidate subset is then 1.5c-dense.
  double spacing = 0.0;
  double candidate_cover = 0.0;
  bool exact_candidates = false;
  if (std::holds_alternative<BoxRegion>(region)) {
    const double n = static_cast<double>(space.dimension());
    // Any l^p norm of a vector is at most n times its max entry.
    spacing = c / n;
    candidate_cover = spacing * n / 2.0;
  } else if (space.kind() == SpaceKind::regular_tree) {
    exact_candidates = true;
  } else if (space.planar_rotation_symmetric()) {
    spacing = c / 2.0;
    candidate_cover = spacing;
  } else {
    const double n = static_cast<double>(space.dimension());
    spacing = c / n;
    candidate_cover = spacing * n / 2.0;
  }

  const auto candidates = region_grid(space, region, exact_candidates ? 1.0 : spacing);
  Net net;
  net.separation = c;
  net.region = region;
  for (const auto& cand : candidates) {
    bool far = true;
    for (const auto& p : net.points)
      if (space.distance(p, cand) < c) {
        far = false;
        break;
      }
    if (far) net.points.push_back(cand);
  }
  net.covering_radius = exact_candidates ? c : c + candidate_cover;
  return net;
}

std::size_t nearest_net_point(const ModelSpace& space, const Net& net, const SpacePoint& p) {
  if (net.points.empty()) throw CoverageError("net is empty");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    const double d = space.distance(net.points[i], p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace stathyp
