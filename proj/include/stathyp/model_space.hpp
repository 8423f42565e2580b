#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stathyp/hyperbolic.hpp"
#include "stathyp/rng.hpp"
#include "stathyp/space_point.hpp"

namespace stathyp {

enum class SpaceKind { euclidean, hyperbolic_plane, modular_torus, regular_tree, sup_product };

std::string to_string(SpaceKind kind);

/// Immutable handle to one of the model geometries. Cheap to copy; product
/// factors are shared.
class ModelSpace {
 public:
  /// R^n with the l^p norm. Default growth exponent 0.
  static ModelSpace euclidean(int dimension, double p = 2.0, std::optional<double> growth = {});
  /// Upper half-plane with curvature -1. Default growth exponent 1.
  static ModelSpace hyperbolic_plane(std::optional<double> growth = {});
  /// Upper half-plane as the Teichmuller space of the torus; same metric as
  /// the hyperbolic plane, with thickness read off the modular reduction.
  static ModelSpace modular_torus(std::optional<double> growth = {});
  /// q-regular tree, vertices only. Default growth exponent log(q - 1).
  static ModelSpace regular_tree(int valence, std::optional<double> growth = {});
  /// Product of continuum factors with the sup of factor distances.
  static ModelSpace sup_product(std::vector<ModelSpace> factors, std::optional<double> growth = {});

  SpaceKind kind() const { return kind_; }
  int dimension() const;
  double norm_exponent() const { return p_; }
  int valence() const { return q_; }
  double growth() const { return h_; }
  const std::vector<ModelSpace>& factors() const;

  bool is_continuum() const { return kind_ != SpaceKind::regular_tree; }
  bool has_thin_part() const { return kind_ == SpaceKind::modular_torus; }
  /// Models where rotating directions about a basepoint is an isometry of a
  /// plane: euclidean R^2 with p = 2, hyperbolic plane, modular torus.
  bool planar_rotation_symmetric() const;

  /// Canonical descriptor, e.g. "hyperbolic-plane(h=1)".
  std::string describe() const;
  /// Default basepoint: origin, i, or the root.
  SpacePoint basepoint() const;

  /// Throws DomainError unless p is a valid point of this model.
  void validate(const SpacePoint& p) const;

  double distance(const SpacePoint& u, const SpacePoint& v) const;

  /// Time-t point on the unit-speed ray from u through v. Tree rays need
  /// integer t; past v they continue along the smallest admissible letter.
  SpacePoint geodesic_point(const SpacePoint& u, const SpacePoint& v, double t) const;

  /// Thickness predicate. Only the modular torus has a thin part:
  /// thick iff Im(reduce(p)) <= 1/eps^2.
  bool is_thick(const SpacePoint& p, double eps) const;

  /// Thickness flags at times 0, dt, ..., steps*dt along the ray from x
  /// through y. The modular torus follows the ray with a renormalized frame
  /// flow so arbitrarily long rays stay numerically meaningful.
  std::vector<bool> thick_along_ray(const SpacePoint& x, const SpacePoint& y, double eps, double dt,
                                    std::size_t steps) const;
  /// Same, for the ray leaving x in direction `angle` (planar models); no
  /// endpoint is formed, so the ray length is unlimited.
  std::vector<bool> thick_along_direction(const SpacePoint& x, double angle, double eps, double dt,
                                          std::size_t steps) const;

  /// Point at distance s from x in a uniformly random direction (visual
  /// measure). Trees walk s backtrack-free steps, s rounded to an integer.
  SpacePoint polar_sample(const SpacePoint& x, double s, StreamRng& rng) const;

  /// For planar_rotation_symmetric models: point at distance s from x in
  /// direction angle, and the direction angle of y seen from x.
  SpacePoint polar_point(const SpacePoint& x, double angle, double s) const;
  double direction_of(const SpacePoint& x, const SpacePoint& y) const;

  /// Tree sphere size q (q - 1)^(r - 1), 1 for r = 0.
  double tree_sphere_size(int radius) const;

 private:
  ModelSpace() = default;

  SpaceKind kind_ = SpaceKind::euclidean;
  int n_ = 2;
  double p_ = 2.0;
  int q_ = 0;
  double h_ = 0.0;
  std::shared_ptr<const std::vector<ModelSpace>> factors_;
};

/// Letter used for edge `i` of a tree vertex ('a' + i).
inline char tree_letter(int i) { return static_cast<char>('a' + i); }

}  // namespace stathyp
