#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "stathyp/space_point.hpp"

namespace stathyp {

/// Supporting half-space normal . x <= offset of a polytope (unit normal).
struct Facet {
  RealVector normal;
  double offset = 0.0;
  double area = 0.0;  // (n-1)-volume of the facet
};

/// Facets of the convex hull of a full-dimensional point set in R^1..R^3.
/// Throws ParameterError when the points do not span the space.
std::vector<Facet> convex_hull_facets(const std::vector<RealVector>& points);

/// Volume of a convex body containing the origin from its facets: sum of offset * area / n.
double volume_from_facets(const std::vector<Facet>& facets, int n);

enum class BodyKind { polytope, ellipsoid, lp_ball, oracle };

/// Centrally symmetric convex body with the origin in its interior.
class ConvexBody {
 public:
  using Membership = std::function<bool(std::span<const double>)>;
  using Support = std::function<double(std::span<const double>)>;

  /// Symmetrized convex hull of the given vertices (dimension 1 to 3).
  static ConvexBody polytope(std::vector<RealVector> vertices);
  static ConvexBody ellipsoid(RealVector semi_axes);
  /// Unit ball of the l^p norm, p in [1, inf].
  static ConvexBody lp_ball(int dimension, double p);
  /// Body known only through membership and support functions; inner and
  /// bounding radii are origin-centred balls contained in / containing it.
  static ConvexBody oracle(int dimension, Membership contains, Support support, double bounding_radius,
                           double inner_radius);

  BodyKind kind() const { return kind_; }
  int dimension() const { return n_; }

  bool contains(std::span<const double> x) const;
  /// h(u) = max over the body of u . x.
  double support(std::span<const double> u) const;
  /// Minkowski gauge: smallest t with u in t * body.
  double gauge(std::span<const double> u) const;
  double bounding_radius() const;
  double inner_radius() const;

  /// Representation details (valid for the matching kind only).
  const std::vector<RealVector>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const RealVector& semi_axes() const { return axes_; }
  double exponent() const { return p_; }

  /// Vertices of the polar polytope (facet normals / offsets).
  std::vector<RealVector> polar_vertices() const;

 private:
  ConvexBody() = default;

  BodyKind kind_ = BodyKind::ellipsoid;
  int n_ = 0;
  std::vector<RealVector> vertices_;
  std::vector<Facet> facets_;
  RealVector axes_;
  double p_ = 2.0;
  std::shared_ptr<const Membership> contains_;
  std::shared_ptr<const Support> support_;
  double bound_ = 0.0;
  double inner_ = 0.0;
};

}  // namespace stathyp
