#pragma once

#include <variant>
#include <vector>

#include "stathyp/model_space.hpp"

namespace stathyp {

/// Axis-aligned coordinate box. Euclidean models, or sup-products of
/// euclidean factors (coordinates concatenated factor by factor).
struct BoxRegion {
  RealVector lower;
  RealVector upper;
};

/// Closed metric ball.
struct BallRegion {
  SpacePoint center;
  double radius = 0.0;
};

using Region = std::variant<BoxRegion, BallRegion>;

/// c-separated set whose covering_radius-balls cover the region; the
/// covering radius never exceeds 2c.
struct Net {
  std::vector<SpacePoint> points;
  double separation = 0.0;
  double covering_radius = 0.0;
  Region region;
};

/// Greedy maximal c-separated subset of a candidate grid fine enough that the
/// result is (2c)-dense in the region.
Net build_net(const ModelSpace& space, const Region& region, double c);

/// Points of a fine grid over the region (spacing ~ step), used by tests and
/// by the coverage check.
std::vector<SpacePoint> region_grid(const ModelSpace& space, const Region& region, double step);

/// Index of the net point nearest to p (first one on ties).
std::size_t nearest_net_point(const ModelSpace& space, const Net& net, const SpacePoint& p);

}  // namespace stathyp
