#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace stathyp {

using RealVector = std::vector<double>;
/// Vertex of a regular tree: backtrack-free word over the letters 'a', 'b', ...
using TreeAddress = std::string;

/// Point of a model space. The active alternative is fixed by the model:
/// real vector (euclidean), upper half-plane value (hyperbolic, modular),
/// tree address (tree), or one point per factor (sup-product).
struct SpacePoint {
  std::variant<RealVector, std::complex<double>, TreeAddress, std::vector<SpacePoint>> coords;

  SpacePoint() = default;
  SpacePoint(RealVector v) : coords(std::move(v)) {}
  SpacePoint(std::complex<double> z) : coords(z) {}
  SpacePoint(TreeAddress a) : coords(std::move(a)) {}
  SpacePoint(std::vector<SpacePoint> parts) : coords(std::move(parts)) {}

  const RealVector& vector() const { return std::get<RealVector>(coords); }
  std::complex<double> complex() const { return std::get<std::complex<double>>(coords); }
  const TreeAddress& address() const { return std::get<TreeAddress>(coords); }
  const std::vector<SpacePoint>& parts() const { return std::get<std::vector<SpacePoint>>(coords); }

  bool operator==(const SpacePoint&) const = default;
};

/// Human-readable rendering used in CSV and error messages.
std::string to_string(const SpacePoint& p);

}  // namespace stathyp
