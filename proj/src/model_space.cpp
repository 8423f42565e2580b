#include "stathyp/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "stathyp/errors.hpp"

namespace stathyp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double pnorm(const RealVector& v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  // Scale by the max entry so large p does not overflow.
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Vertex neighbours in a fixed order: parent first, then children by letter.
std::vector<TreeAddress> tree_neighbors(const TreeAddress& w, int q) {
  std::vector<TreeAddress> out;
  out.reserve(static_cast<std::size_t>(q));
  if (!w.empty()) out.push_back(w.substr(0, w.size() - 1));
  for (int i = 0; i < q; ++i) {
    const char c = tree_letter(i);
    if (!w.empty() && w.back() == c) continue;
    out.push_back(w + c);
  }
  return out;
}

std::size_t common_prefix(const TreeAddress& u, const TreeAddress& v) {
  std::size_t l = 0;
  while (l < u.size() && l < v.size() && u[l] == v[l]) ++l;
  return l;
}

long integral_time(double t) {
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9) throw DomainError("tree geodesics are sampled at integer times only");
  return static_cast<long>(r);
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean: return "euclidean-p-norm";
    case SpaceKind::hyperbolic_plane: return "hyperbolic-plane";
    case SpaceKind::modular_torus: return "modular-torus";
    case SpaceKind::regular_tree: return "regular-tree";
    case SpaceKind::sup_product: return "sup-product";
  }
  return "unknown";
}

std::string to_string(const SpacePoint& p) {
  std::ostringstream os;
  os.precision(12);
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, RealVector>) {
          os << '(';
          for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
          os << ')';
        } else if constexpr (std::is_same_v<T, std::complex<double>>) {
          os << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << 'i';
        } else if constexpr (std::is_same_v<T, TreeAddress>) {
          os << '"' << c << '"';
        } else {
          os << '[';
          for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << to_string(c[i]);
          os << ']';
        }
      },
      p.coords);
  return os.str();
}

ModelSpace ModelSpace::euclidean(int dimension, double p, std::optional<double> growth) {
  if (dimension < 1) throw ParameterError("euclidean dimension must be >= 1");
  if (!(p >= 1.0)) throw ParameterError("norm exponent must lie in [1, inf]");
  ModelSpace s;
  s.kind_ = SpaceKind::euclidean;
  s.n_ = dimension;
  s.p_ = p;
  s.h_ = growth.value_or(0.0);
  return s;
}

ModelSpace ModelSpace::hyperbolic_plane(std::optional<double> growth) {
  ModelSpace s;
  s.kind_ = SpaceKind::hyperbolic_plane;
  s.h_ = growth.value_or(1.0);
  return s;
}

ModelSpace ModelSpace::modular_torus(std::optional<double> growth) {
  ModelSpace s;
  s.kind_ = SpaceKind::modular_torus;
  s.h_ = growth.value_or(1.0);
  return s;
}

ModelSpace ModelSpace::regular_tree(int valence, std::optional<double> growth) {
  if (valence < 2 || valence > 26) throw ParameterError("tree valence must lie in [2, 26]");
  ModelSpace s;
  s.kind_ = SpaceKind::regular_tree;
  s.q_ = valence;
  s.n_ = 1;
  s.h_ = growth.value_or(std::log(static_cast<double>(valence - 1)));
  return s;
}

ModelSpace ModelSpace::sup_product(std::vector<ModelSpace> factors, std::optional<double> growth) {
  if (factors.size() < 2) throw ParameterError("sup-product needs at least two factors");
  for (const auto& f : factors)
    if (!f.is_continuum() || f.kind() == SpaceKind::sup_product)
      throw ParameterError("sup-product factors must be euclidean or hyperbolic models");
  ModelSpace s;
  s.kind_ = SpaceKind::sup_product;
  s.h_ = growth.value_or(0.0);
  s.factors_ = std::make_shared<const std::vector<ModelSpace>>(std::move(factors));
  return s;
}

int ModelSpace::dimension() const {
  switch (kind_) {
    case SpaceKind::euclidean: return n_;
    case SpaceKind::hyperbolic_plane:
    case SpaceKind::modular_torus: return 2;
    case SpaceKind::regular_tree: return 1;
    case SpaceKind::sup_product: {
      int n = 0;
      for (const auto& f : *factors_) n += f.dimension();
      return n;
    }
  }
  return 0;
}

const std::vector<ModelSpace>& ModelSpace::factors() const {
  static const std::vector<ModelSpace> none;
  return factors_ ? *factors_ : none;
}

bool ModelSpace::planar_rotation_symmetric() const {
  return kind_ == SpaceKind::hyperbolic_plane || kind_ == SpaceKind::modular_torus ||
         (kind_ == SpaceKind::euclidean && n_ == 2 && p_ == 2.0);
}

std::string ModelSpace::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << '(';
  switch (kind_) {
    case SpaceKind::euclidean:
      os << "n=" << n_ << ",p=" << (std::isinf(p_) ? std::string("inf") : format_number(p_)) << ',';
      break;
    case SpaceKind::regular_tree: os << "q=" << q_ << ','; break;
    case SpaceKind::sup_product:
      os << '[';
      for (std::size_t i = 0; i < factors_->size(); ++i) os << (i ? ";" : "") << (*factors_)[i].describe();
      os << "],";
      break;
    default: break;
  }
  os << "h=" << format_number(h_) << ')';
  return os.str();
}

SpacePoint ModelSpace::basepoint() const {
  switch (kind_) {
    case SpaceKind::euclidean: return RealVector(static_cast<std::size_t>(n_), 0.0);
    case SpaceKind::hyperbolic_plane:
    case SpaceKind::modular_torus: return std::complex<double>(0.0, 1.0);
    case SpaceKind::regular_tree: return TreeAddress{};
    case SpaceKind::sup_product: {
      std::vector<SpacePoint> parts;
      for (const auto& f : *factors_) parts.push_back(f.basepoint());
      return parts;
    }
  }
  return {};
}

void ModelSpace::validate(const SpacePoint& p) const {
  switch (kind_) {
    case SpaceKind::euclidean: {
      const auto* v = std::get_if<RealVector>(&p.coords);
      if (!v || v->size() != static_cast<std::size_t>(n_))
        throw DomainError("euclidean point must be a real vector of length " + std::to_string(n_));
      for (double x : *v)
        if (!std::isfinite(x)) throw DomainError("euclidean coordinates must be finite");
      return;
    }
    case SpaceKind::hyperbolic_plane:
    case SpaceKind::modular_torus: {
      const auto* z = std::get_if<std::complex<double>>(&p.coords);
      if (!z) throw DomainError("hyperbolic point must be a complex number");
      if (!(z->imag() > 0.0) || !std::isfinite(z->imag()) || !std::isfinite(z->real()))
        throw DomainError("hyperbolic point must have finite coordinates and Im z > 0");
      return;
    }
    case SpaceKind::regular_tree: {
      const auto* a = std::get_if<TreeAddress>(&p.coords);
      if (!a) throw DomainError("tree point must be an edge address");
      for (std::size_t i = 0; i < a->size(); ++i) {
        const char c = (*a)[i];
        if (c < 'a' || c >= tree_letter(q_)) throw DomainError("tree address uses an invalid edge label");
        if (i > 0 && (*a)[i - 1] == c) throw DomainError("tree address backtracks");
      }
      return;
    }
    case SpaceKind::sup_product: {
      const auto* parts = std::get_if<std::vector<SpacePoint>>(&p.coords);
      if (!parts || parts->size() != factors_->size())
        throw DomainError("sup-product point needs one coordinate block per factor");
      for (std::size_t i = 0; i < parts->size(); ++i) (*factors_)[i].validate((*parts)[i]);
      return;
    }
  }
}

double ModelSpace::distance(const SpacePoint& u, const SpacePoint& v) const {
  validate(u);
  validate(v);
  switch (kind_) {
    case SpaceKind::euclidean: {
      RealVector diff(u.vector());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= v.vector()[i];
      return pnorm(diff, p_);
    }
    case SpaceKind::hyperbolic_plane:
    case SpaceKind::modular_torus: return hyperbolic_distance(u.complex(), v.complex());
    case SpaceKind::regular_tree: {
      const auto& a = u.address();
      const auto& b = v.address();
      return static_cast<double>(a.size() + b.size() - 2 * common_prefix(a, b));
    }
    case SpaceKind::sup_product: {
      double m = 0.0;
      for (std::size_t i = 0; i < factors_->size(); ++i)
        m = std::max(m, (*factors_)[i].distance(u.parts()[i], v.parts()[i]));
      return m;
    }
  }
  return 0.0;
}

SpacePoint ModelSpace::geodesic_point(const SpacePoint& u, const SpacePoint& v, double t) const {
  if (!(t >= 0.0)) throw ParameterError("geodesic time must be >= 0");
  const double d = distance(u, v);
  if (t == 0.0) return u;
  if (d == 0.0) throw DegenerateError("geodesic ray from coincident points is undefined");
  switch (kind_) {
    case SpaceKind::euclidean: {
      RealVector out(u.vector());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * (v.vector()[i] - u.vector()[i]) / d;
      return out;
    }
    case SpaceKind::hyperbolic_plane:
    case SpaceKind::modular_torus: {
      if (t == d) return v;
      return Frame::toward(u.complex(), v.complex()).flowed(t).point();
    }
    case SpaceKind::regular_tree: {
      const long k = integral_time(t);
      const auto& a = u.address();
      const auto& b = v.address();
      const long l = static_cast<long>(common_prefix(a, b));
      const long up = static_cast<long>(a.size()) - l;
      if (k <= up) return a.substr(0, a.size() - static_cast<std::size_t>(k));
      const long down = k - up;
      if (down <= static_cast<long>(b.size()) - l) return b.substr(0, static_cast<std::size_t>(l + down));
      // Past v: keep walking without backtracking, smallest admissible neighbour first.
      TreeAddress prev = geodesic_point(u, v, d - 1).address();
      TreeAddress cur = b;
      for (long step = static_cast<long>(d); step < k; ++step) {
        const auto nb = tree_neighbors(cur, q_);
        // children come after the parent in tree_neighbors; prefer them
        const TreeAddress* next = nullptr;
        for (std::size_t i = cur.empty() ? 0 : 1; i < nb.size() && !next; ++i)
          if (nb[i] != prev) next = &nb[i];
        if (!next) next = &nb[0];
        prev = cur;
        cur = *next;
      }
      return cur;
    }
    case SpaceKind::sup_product: {
      std::vector<SpacePoint> parts;
      for (std::size_t i = 0; i < factors_->size(); ++i) {
        const auto& f = (*factors_)[i];
        const double di = f.distance(u.parts()[i], v.parts()[i]);
        parts.push_back(di == 0.0 ? u.parts()[i] : f.geodesic_point(u.parts()[i], v.parts()[i], t * di / d));
      }
      return parts;
    }
  }
  return u;
}

bool ModelSpace::is_thick(const SpacePoint& p, double eps) const {
  if (!(eps > 0.0)) throw ParameterError("thickness parameter must be > 0");
  validate(p);
  if (kind_ != SpaceKind::modular_torus) return true;
  return reduce_modular(p.complex()).reduced.imag() <= 1.0 / (eps * eps);
}

namespace {

std::vector<bool> modular_thickness_flow(Frame frame, double eps, double dt, std::size_t steps) {
  std::vector<bool> flags(steps + 1, true);
  const double height = 1.0 / (eps * eps);
  const Sl2 step = Sl2::lift(dt);
  for (std::size_t j = 0; j <= steps; ++j) {
    const auto red = reduce_modular(frame.point());
    flags[j] = red.reduced.imag() <= height;
    Sl2 m = red.matrix * frame.matrix() * step;
    // Keep det = 1 against drift over very long flows.
    const double s = 1.0 / std::sqrt(m.det());
    m = {m.a * s, m.b * s, m.c * s, m.d * s};
    frame = Frame(m);
  }
  return flags;
}

void check_flow_params(double eps, double dt) {
  if (!(eps > 0.0)) throw ParameterError("thickness parameter must be > 0");
  if (!(dt > 0.0)) throw ParameterError("time step must be > 0");
}

}  // namespace

std::vector<bool> ModelSpace::thick_along_ray(const SpacePoint& x, const SpacePoint& y, double eps, double dt,
                                              std::size_t steps) const {
  check_flow_params(eps, dt);
  validate(x);
  validate(y);
  if (x == y) throw DegenerateError("geodesic ray from coincident points is undefined");
  if (kind_ != SpaceKind::modular_torus) return std::vector<bool>(steps + 1, true);
  return modular_thickness_flow(Frame::toward(x.complex(), y.complex()), eps, dt, steps);
}

std::vector<bool> ModelSpace::thick_along_direction(const SpacePoint& x, double angle, double eps, double dt,
                                                    std::size_t steps) const {
  if (!planar_rotation_symmetric()) throw UnsupportedError("directions need a rotation-symmetric planar model");
  check_flow_params(eps, dt);
  validate(x);
  if (kind_ != SpaceKind::modular_torus) return std::vector<bool>(steps + 1, true);
  return modular_thickness_flow(Frame::at(x.complex(), angle), eps, dt, steps);
}

SpacePoint ModelSpace::polar_sample(const SpacePoint& x, double s, StreamRng& rng) const {
  switch (kind_) {
    case SpaceKind::euclidean: {
      std::normal_distribution<double> gauss;
      RealVector dir(static_cast<std::size_t>(n_));
      double norm = 0.0;
      while (norm == 0.0) {
        for (auto& c : dir) c = gauss(rng);
        norm = pnorm(dir, p_);
      }
      RealVector out(x.vector());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * dir[i] / norm;
      return out;
    }
    case SpaceKind::hyperbolic_plane:
    case SpaceKind::modular_torus: {
      const double angle = kTwoPi * rng.uniform();
      return Frame::at(x.complex(), angle).flowed(s).point();
    }
    case SpaceKind::regular_tree: {
      const long steps = std::lround(s);
      TreeAddress prev;
      bool have_prev = false;
      TreeAddress cur = x.address();
      for (long i = 0; i < steps; ++i) {
        auto nb = tree_neighbors(cur, q_);
        if (have_prev) nb.erase(std::find(nb.begin(), nb.end(), prev));
        std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
        prev = cur;
        have_prev = true;
        cur = nb[pick(rng)];
      }
      return cur;
    }
    case SpaceKind::sup_product: {
      const std::size_t m = factors_->size();
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      const std::size_t lead = pick(rng);
      std::vector<SpacePoint> parts;
      for (std::size_t i = 0; i < m; ++i) {
        const double speed = i == lead ? 1.0 : rng.uniform();
        const double si = speed * s;
        parts.push_back(si == 0.0 ? x.parts()[i] : (*factors_)[i].polar_sample(x.parts()[i], si, rng));
      }
      return parts;
    }
  }
  return x;
}

SpacePoint ModelSpace::polar_point(const SpacePoint& x, double angle, double s) const {
  if (!planar_rotation_symmetric()) throw UnsupportedError("polar_point needs a rotation-symmetric planar model");
  validate(x);
  if (kind_ == SpaceKind::euclidean) {
    const auto& v = x.vector();
    return RealVector{v[0] - s * std::sin(angle), v[1] + s * std::cos(angle)};
  }
  return Frame::at(x.complex(), angle).flowed(s).point();
}

double ModelSpace::direction_of(const SpacePoint& x, const SpacePoint& y) const {
  if (!planar_rotation_symmetric()) throw UnsupportedError("direction_of needs a rotation-symmetric planar model");
  validate(x);
  validate(y);
  if (x == y) throw DegenerateError("direction between coincident points is undefined");
  if (kind_ == SpaceKind::euclidean) {
    const auto& a = x.vector();
    const auto& b = y.vector();
    return std::atan2(-(b[0] - a[0]), b[1] - a[1]);
  }
  return direction_angle(x.complex(), y.complex());
}

double ModelSpace::tree_sphere_size(int radius) const {
  if (kind_ != SpaceKind::regular_tree) throw UnsupportedError("sphere sizes are defined for trees only");
  if (radius < 0) throw ParameterError("radius must be >= 0");
  if (radius == 0) return 1.0;
  return q_ * std::pow(static_cast<double>(q_ - 1), radius - 1);
}

}  // namespace stathyp
