#include "stathyp/convex_body.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "stathyp/errors.hpp"

namespace stathyp {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double scale_of(const std::vector<RealVector>& pts) {
  double s = 0.0;
  for (const auto& p : pts)
    for (double x : p) s = std::max(s, std::abs(x));
  return s;
}

std::vector<Facet> hull_1d(const std::vector<RealVector>& pts) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  if (!(hi > lo)) throw ParameterError("points do not span R^1");
  return {Facet{{1.0}, hi, 1.0}, Facet{{-1.0}, -lo, 1.0}};
}

std::vector<Facet> hull_2d(const std::vector<RealVector>& pts) {
  // Andrew's monotone chain, counterclockwise.
  std::vector<std::pair<double, double>> p;
  for (const auto& v : pts) p.emplace_back(v[0], v[1]);
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  const double eps = 1e-14 * std::max(1.0, scale_of(pts));
  auto turn = [](auto o, auto a, auto b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], p[i]) <= eps) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && turn(h[k - 2], h[k - 1], p[i]) <= eps) --k;
    h[k++] = p[i];
  }
  h.resize(k > 0 ? k - 1 : 0);
  if (h.size() < 3) throw ParameterError("points do not span R^2");
  std::vector<Facet> out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto a = h[i];
    const auto b = h[(i + 1) % h.size()];
    const double ex = b.first - a.first, ey = b.second - a.second;
    const double len = std::hypot(ex, ey);
    // Outward normal of a counterclockwise edge.
    const RealVector nrm{ey / len, -ex / len};
    out.push_back(Facet{nrm, nrm[0] * a.first + nrm[1] * a.second, len});
  }
  return out;
}

std::vector<Facet> hull_3d(const std::vector<RealVector>& input) {
  std::vector<Vec3> pts;
  for (const auto& v : input) pts.push_back({v[0], v[1], v[2]});
  const double scale = std::max(1e-300, scale_of(input));
  const double eps = 1e-12 * scale;
  const std::size_t m = pts.size();
  if (m < 4) throw ParameterError("points do not span R^3");

  // Initial tetrahedron from extreme points.
  std::size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = norm3(sub(pts[i], pts[i0]));
    if (d > best) best = d, i1 = i;
  }
  best = -1.0;
  const Vec3 axis = sub(pts[i1], pts[i0]);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = norm3(cross(axis, sub(pts[i], pts[i0])));
    if (d > best) best = d, i2 = i;
  }
  const Vec3 plane = cross(axis, sub(pts[i2], pts[i0]));
  best = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = std::abs(dot3(plane, sub(pts[i], pts[i0])));
    if (d > best) best = d, i3 = i;
  }
  if (norm3(plane) <= eps * scale || best <= eps * norm3(plane)) throw ParameterError("points do not span R^3");

  struct Tri {
    std::size_t a, b, c;
    Vec3 n;  // unnormalized outward normal
    bool alive = true;
  };
  Vec3 centroid{0, 0, 0};
  for (auto idx : {i0, i1, i2, i3})
    for (int k = 0; k < 3; ++k) centroid[static_cast<std::size_t>(k)] += 0.25 * pts[idx][static_cast<std::size_t>(k)];

  std::vector<Tri> faces;
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    Vec3 n = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
    if (dot3(n, sub(pts[a], centroid)) < 0) {
      std::swap(b, c);
      n = Vec3{-n[0], -n[1], -n[2]};
    }
    faces.push_back({a, b, c, n, true});
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  auto side_of = [&](const Tri& f, std::size_t p) { return dot3(f.n, sub(pts[p], pts[f.a])) / norm3(f.n); };
  for (std::size_t p = 0; p < m; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::size_t start = faces.size();
    double top = eps;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      const double s = side_of(faces[i], p);
      if (s > top) top = s, start = i;
    }
    if (start == faces.size()) continue;  // inside, up to eps

    // Grow the visible region from the most visible face. Faces p nearly lies
    // on count as visible, which keeps the region a disc even when a
    // borderline face would otherwise split it.
    auto has_edge = [](const Tri& g, std::size_t a, std::size_t b) {
      return (g.a == a && g.b == b) || (g.b == a && g.c == b) || (g.c == a && g.a == b);
    };
    std::vector<std::size_t> stack{start};
    faces[start].alive = false;
    while (!stack.empty()) {
      const Tri f = faces[stack.back()];
      stack.pop_back();
      for (auto [a, b] : {std::pair{f.a, f.b}, std::pair{f.b, f.c}, std::pair{f.c, f.a}})
        for (std::size_t j = 0; j < faces.size(); ++j) {
          auto& g = faces[j];
          if (!g.alive || !has_edge(g, b, a)) continue;
          if (side_of(g, p) > -eps) {
            g.alive = false;
            stack.push_back(j);
          }
          break;
        }
    }
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& f : faces)
      if (!f.alive) {
        edges.insert({f.a, f.b});
        edges.insert({f.b, f.c});
        edges.insert({f.c, f.a});
      }
    for (const auto& [a, b] : edges)
      if (!edges.count({b, a})) {
        const Vec3 n = cross(sub(pts[b], pts[a]), sub(pts[p], pts[a]));
        faces.push_back({a, b, p, n, true});
      }
    std::erase_if(faces, [](const Tri& f) { return !f.alive; });
  }

  std::vector<Facet> out;
  for (const auto& f : faces) {
    const double len = norm3(f.n);
    if (len <= 0.0) continue;
    const RealVector nrm{f.n[0] / len, f.n[1] / len, f.n[2] / len};
    out.push_back(Facet{nrm, nrm[0] * pts[f.a][0] + nrm[1] * pts[f.a][1] + nrm[2] * pts[f.a][2], 0.5 * len});
  }
  return out;
}

double lp_norm(std::span<const double> x, double p) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (std::isinf(p) || m == 0.0) return m;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double conjugate_exponent(double p) {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

}  // namespace

std::vector<Facet> convex_hull_facets(const std::vector<RealVector>& points) {
  if (points.empty()) throw ParameterError("convex hull of an empty point set");
  const std::size_t n = points.front().size();
  for (const auto& p : points)
    if (p.size() != n) throw ParameterError("hull points have mixed dimensions");
  switch (n) {
    case 1: return hull_1d(points);
    case 2: return hull_2d(points);
    case 3: return hull_3d(points);
    default: throw UnsupportedError("exact polytope hulls are limited to dimension <= 3");
  }
}

double volume_from_facets(const std::vector<Facet>& facets, int n) {
  double v = 0.0;
  for (const auto& f : facets) v += f.offset * f.area;
  return v / n;
}

ConvexBody ConvexBody::polytope(std::vector<RealVector> vertices) {
  if (vertices.empty()) throw ParameterError("polytope needs at least one vertex");
  const std::size_t n = vertices.front().size();
  if (n < 1 || n > 3) throw UnsupportedError("polytope bodies are limited to dimension 1..3");
  const std::size_t k = vertices.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (vertices[i].size() != n) throw ParameterError("polytope vertices have mixed dimensions");
    RealVector neg(vertices[i]);
    for (auto& x : neg) x = -x;
    vertices.push_back(std::move(neg));
  }
  ConvexBody b;
  b.kind_ = BodyKind::polytope;
  b.n_ = static_cast<int>(n);
  b.facets_ = convex_hull_facets(vertices);
  for (const auto& f : b.facets_)
    if (!(f.offset > 0.0)) throw ParameterError("polytope must contain the origin in its interior");
  b.vertices_ = std::move(vertices);
  return b;
}

ConvexBody ConvexBody::ellipsoid(RealVector semi_axes) {
  if (semi_axes.empty()) throw ParameterError("ellipsoid needs at least one axis");
  for (double a : semi_axes)
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("ellipsoid semi-axes must be finite and > 0");
  ConvexBody b;
  b.kind_ = BodyKind::ellipsoid;
  b.n_ = static_cast<int>(semi_axes.size());
  b.axes_ = std::move(semi_axes);
  return b;
}

ConvexBody ConvexBody::lp_ball(int dimension, double p) {
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  if (!(p >= 1.0)) throw ParameterError("l^p exponent must lie in [1, inf]");
  ConvexBody b;
  b.kind_ = BodyKind::lp_ball;
  b.n_ = dimension;
  b.p_ = p;
  return b;
}

ConvexBody ConvexBody::oracle(int dimension, Membership contains, Support support, double bounding_radius,
                              double inner_radius) {
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  if (!(inner_radius > 0.0) || !(bounding_radius >= inner_radius) || !std::isfinite(bounding_radius))
    throw ParameterError("oracle body needs 0 < inner radius <= bounding radius < inf");
  ConvexBody b;
  b.kind_ = BodyKind::oracle;
  b.n_ = dimension;
  b.contains_ = std::make_shared<const Membership>(std::move(contains));
  b.support_ = std::make_shared<const Support>(std::move(support));
  b.bound_ = bounding_radius;
  b.inner_ = inner_radius;
  return b;
}

bool ConvexBody::contains(std::span<const double> x) const {
  switch (kind_) {
    case BodyKind::polytope:
      for (const auto& f : facets_)
        if (dot(f.normal, x) > f.offset) return false;
      return true;
    case BodyKind::ellipsoid: {
      double s = 0.0;
      for (std::size_t i = 0; i < axes_.size(); ++i) s += (x[i] / axes_[i]) * (x[i] / axes_[i]);
      return s <= 1.0;
    }
    case BodyKind::lp_ball: return lp_norm(x, p_) <= 1.0;
    case BodyKind::oracle: return (*contains_)(x);
  }
  return false;
}

double ConvexBody::support(std::span<const double> u) const {
  switch (kind_) {
    case BodyKind::polytope: {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& v : vertices_) m = std::max(m, dot(v, u));
      return m;
    }
    case BodyKind::ellipsoid: {
      double s = 0.0;
      for (std::size_t i = 0; i < axes_.size(); ++i) s += (axes_[i] * u[i]) * (axes_[i] * u[i]);
      return std::sqrt(s);
    }
    case BodyKind::lp_ball: return lp_norm(u, conjugate_exponent(p_));
    case BodyKind::oracle: return (*support_)(u);
  }
  return 0.0;
}

double ConvexBody::gauge(std::span<const double> u) const {
  switch (kind_) {
    case BodyKind::polytope: {
      double m = 0.0;
      for (const auto& f : facets_) m = std::max(m, dot(f.normal, u) / f.offset);
      return m;
    }
    case BodyKind::ellipsoid: {
      double s = 0.0;
      for (std::size_t i = 0; i < axes_.size(); ++i) s += (u[i] / axes_[i]) * (u[i] / axes_[i]);
      return std::sqrt(s);
    }
    case BodyKind::lp_ball: return lp_norm(u, p_);
    case BodyKind::oracle: {
      // Bisection on t with u / t in the body; t lies in [|u| / R, |u| / r].
      const double len = std::sqrt(dot(u, u));
      if (len == 0.0) return 0.0;
      double lo = len / bound_, hi = len / inner_;
      RealVector probe(u.begin(), u.end());
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < probe.size(); ++i) probe[i] = u[i] / mid;
        (contains(probe) ? hi : lo) = mid;
      }
      return hi;
    }
  }
  return 0.0;
}

double ConvexBody::bounding_radius() const {
  switch (kind_) {
    case BodyKind::polytope: {
      double m = 0.0;
      for (const auto& v : vertices_) m = std::max(m, std::sqrt(dot(v, v)));
      return m;
    }
    case BodyKind::ellipsoid: return *std::max_element(axes_.begin(), axes_.end());
    case BodyKind::lp_ball:
      // Largest euclidean norm on the l^p unit sphere.
      return p_ >= 2.0 ? (std::isinf(p_) ? std::sqrt(static_cast<double>(n_))
                                         : std::pow(static_cast<double>(n_), 0.5 - 1.0 / p_))
                       : 1.0;
    case BodyKind::oracle: return bound_;
  }
  return 0.0;
}

double ConvexBody::inner_radius() const {
  switch (kind_) {
    case BodyKind::polytope: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& f : facets_) m = std::min(m, f.offset);
      return m;
    }
    case BodyKind::ellipsoid: return *std::min_element(axes_.begin(), axes_.end());
    case BodyKind::lp_ball:
      return p_ <= 2.0 ? std::pow(static_cast<double>(n_), 0.5 - 1.0 / p_) : 1.0;
    case BodyKind::oracle: return inner_;
  }
  return 0.0;
}

std::vector<RealVector> ConvexBody::polar_vertices() const {
  if (kind_ != BodyKind::polytope) throw UnsupportedError("polar vertices are defined for polytopes only");
  std::vector<RealVector> out;
  for (const auto& f : facets_) {
    RealVector v(f.normal);
    for (auto& x : v) x /= f.offset;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace stathyp
