#include "stathyp/statistics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "stathyp/errors.hpp"
#include "stathyp/rng.hpp"
#include "stathyp/sampling.hpp"

namespace stathyp {

namespace {

constexpr double kHitTolerance = 1e-9;

std::string canonical(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += '|';
    out += p;
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

EstimateResult summarize(const std::vector<double>& values, double r, double k, std::uint64_t seed,
                         std::string description) {
  const auto me = mean_and_error(values);
  EstimateResult out;
  out.mean = me.mean;
  out.std_error = me.std_error;
  out.n_pairs = values.size();
  out.radius = r;
  out.shell_width = k;
  out.seed = seed;
  out.config_digest = digest(description);
  return out;
}

std::vector<double> grid_times(const ModelSpace& space, double a, double b, double ds) {
  if (!(ds > 0.0)) throw ParameterError("grid step must be > 0");
  std::vector<double> out;
  if (!space.is_continuum()) {
    for (double s = std::ceil(a); s <= std::floor(b); s += 1.0) out.push_back(s);
    if (out.empty()) throw ParameterError("tree segment grid contains no vertex");
    return out;
  }
  const auto count = static_cast<std::size_t>(std::floor((b - a) / ds + 1e-9));
  out.reserve(count + 2);
  for (std::size_t j = 0; j <= count; ++j) out.push_back(a + static_cast<double>(j) * ds);
  if (b - out.back() > 1e-12 * std::max(1.0, b)) out.push_back(b);
  return out;
}

void check_count(std::size_t n) {
  if (n < 10) throw ParameterError("sample count must be >= 10");
}

struct SideGrid {
  SpacePoint from, to;
  std::vector<double> times;
  std::vector<SpacePoint> points;
};

SideGrid side_grid(const ModelSpace& space, const SpacePoint& u, const SpacePoint& v, double a, double b,
                   double ds) {
  SideGrid g{u, v, grid_times(space, a, b, ds), {}};
  g.points.reserve(g.times.size());
  for (double t : g.times) g.points.push_back(space.geodesic_point(u, v, t));
  return g;
}

// Minimum of d(p, .) over one side. Consecutive grid points are at most ds
// apart, so d(p, grid[j + m]) >= d(p, grid[j]) - m ds and indices that cannot
// beat the running best are skipped. On continuum models the grid minimum is
// then polished by golden-section search between its neighbours (distance to
// a geodesic is convex in every model here); the result is still attained, so
// it stays an upper bound.
double side_min_distance(const ModelSpace& space, const SpacePoint& p, const SideGrid& g, double ds) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  std::size_t j = 0;
  while (j < g.points.size()) {
    const double d = space.distance(p, g.points[j]);
    if (d < best) {
      best = d;
      arg = j;
    }
    const double slack = (d - best) / ds * (1.0 - 1e-9);
    j += slack > 1.0 ? static_cast<std::size_t>(std::min(slack, 1e15)) : 1;
  }
  if (!space.is_continuum() || g.points.size() < 2) return best;
  double lo = g.times[arg == 0 ? 0 : arg - 1];
  double hi = g.times[std::min(arg + 1, g.times.size() - 1)];
  auto f = [&](double t) { return space.distance(p, space.geodesic_point(g.from, g.to, t)); };
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double m1 = hi - inv_phi * (hi - lo), m2 = lo + inv_phi * (hi - lo);
  double f1 = f(m1), f2 = f(m2);
  for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - inv_phi * (hi - lo);
      f1 = f(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + inv_phi * (hi - lo);
      f2 = f(m2);
    }
  }
  return std::min({best, f1, f2});
}

struct ProbeGrids {
  std::vector<SpacePoint> interval;
  SideGrid xz;
  SideGrid yz;
  double step;
};

ProbeGrids probe_grids(const ModelSpace& space, const SpacePoint& x, const SpacePoint& y, const SpacePoint& z,
                       double s1, double s2, double c, double ds) {
  space.validate(x);
  space.validate(y);
  space.validate(z);
  if (!(ds > 0.0)) throw ParameterError("probe step must be > 0");
  if (!(c >= 0.0)) throw ParameterError("neighborhood radius must be >= 0");
  if (x == y || x == z || y == z) throw DegenerateError("triangle has a degenerate side");
  const double dxy = space.distance(x, y);
  const double dxz = space.distance(x, z);
  const double dyz = space.distance(y, z);
  if (dxy <= 0.0 || dxz <= 0.0 || dyz <= 0.0) throw DegenerateError("triangle has a degenerate side");
  if (!(s1 >= 0.0 && s1 < s2 && s2 <= dxy * (1.0 + 1e-12)))
    throw ParameterError("interval must satisfy 0 <= s1 < s2 <= d(x, y)");
  const double step = space.is_continuum() ? ds : 1.0;
  return {segment_grid(space, x, y, s1, std::min(s2, dxy), step), side_grid(space, x, z, 0.0, dxz, step),
          side_grid(space, y, z, 0.0, dyz, step), step};
}

double probe_point(const ModelSpace& space, const SpacePoint& p, const ProbeGrids& g) {
  return std::min(side_min_distance(space, p, g.xz, g.step), side_min_distance(space, p, g.yz, g.step));
}

// Left-endpoint quadrature, accumulated as thin time so a ray that never
// leaves the thick part gives exactly 1. The last partial step carries
// weight length - whole * dt.
double grid_fraction(const std::vector<bool>& flags, double length, double dt) {
  const std::size_t whole = flags.size() - 1;
  std::size_t thin = 0;
  for (std::size_t j = 0; j < whole; ++j)
    if (!flags[j]) ++thin;
  double thin_time = static_cast<double>(thin) * dt;
  if (!flags[whole]) thin_time += std::max(0.0, length - static_cast<double>(whole) * dt);
  return std::clamp(1.0 - thin_time / length, 0.0, 1.0);
}


}  // namespace

std::string digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EstimateResult estimate_E(const ModelSpace& space, const SpacePoint& x, double r, double k, std::size_t n,
                          std::uint64_t seed, int workers) {
  check_shell(space, r, k);
  check_count(n);
  space.validate(x);
  std::vector<double> values(n);
  parallel_for(n, workers, [&](std::size_t i) {
    StreamRng rng(seed, i);
    const SpacePoint y = sample_shell_point(space, x, r, k, rng);
    const SpacePoint z = sample_shell_point(space, x, r, k, rng);
    values[i] = space.distance(y, z) / r;
  });
  return summarize(values, r, k, seed,
                   canonical({"estimate-e", space.describe(), to_string(x), num(r), num(k), std::to_string(n),
                              std::to_string(seed)}));
}

double thick_stat(const ModelSpace& space, const SpacePoint& x, const SpacePoint& y, double eps, double dt) {
  if (!(dt > 0.0)) throw ParameterError("time step must be > 0");
  space.validate(x);
  space.validate(y);
  if (x == y) throw DegenerateError("thick-stat of a degenerate segment");
  const double length = space.distance(x, y);
  if (!(length > 0.0)) throw DegenerateError("thick-stat of a degenerate segment");
  const auto whole = static_cast<std::size_t>(std::floor(length / dt + 1e-12));
  return grid_fraction(space.thick_along_ray(x, y, eps, dt, whole), length, dt);
}

double ray_thick_stat(const ModelSpace& space, const SpacePoint& x, double angle, double length, double eps,
                      double dt) {
  if (!(dt > 0.0)) throw ParameterError("time step must be > 0");
  if (!(length > 0.0)) throw DegenerateError("thick-stat of a degenerate segment");
  const auto whole = static_cast<std::size_t>(std::floor(length / dt + 1e-12));
  return grid_fraction(space.thick_along_direction(x, angle, eps, dt, whole), length, dt);
}

EstimateResult p1_fraction(const ModelSpace& space, const SpacePoint& x, double r, double k, double eps,
                           double theta, double sigma, std::size_t n, double dt, std::uint64_t seed, int workers) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ParameterError("sigma must lie in (0, 1)");
  if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("theta must lie in (0, 1)");
  if (!(eps > 0.0)) throw ParameterError("thickness parameter must be > 0");
  if (!(dt > 0.0)) throw ParameterError("time step must be > 0");
  check_shell(space, r, k);
  check_count(n);
  space.validate(x);
  const auto steps = static_cast<std::size_t>(std::floor(r / dt + 1e-12));
  const auto first = static_cast<std::size_t>(std::max(1.0, std::ceil(sigma * r / dt - 1e-12)));
  std::vector<double> values(n);
  parallel_for(n, workers, [&](std::size_t i) {
    StreamRng rng(seed, i);
    const SpacePoint y = sample_shell_point(space, x, r, k, rng);
    const auto flags = space.thick_along_ray(x, y, eps, dt, steps);
    // Prefix thick time over [0, j dt] on the same left-endpoint grid as thick_stat.
    std::size_t count = 0;
    bool ok = true;
    for (std::size_t j = 1; j <= steps && ok; ++j) {
      if (flags[j - 1]) ++count;
      if (j >= first && static_cast<double>(count) / static_cast<double>(j) < theta) ok = false;
    }
    values[i] = ok ? 1.0 : 0.0;
  });
  return summarize(values, r, k, seed,
                   canonical({"p1", space.describe(), to_string(x), num(r), num(k), num(eps), num(theta),
                              num(sigma), std::to_string(n), num(dt), std::to_string(seed)}));
}

double longest_thick_run(const std::vector<bool>& flags, double dt) {
  std::size_t best = 0;
  std::size_t run = 0;
  for (bool f : flags) {
    run = f ? run + 1 : 0;
    best = std::max(best, run);
  }
  return static_cast<double>(best) * dt;
}

double orbit_fraction(const ModelSpace& space, const SpacePoint& x, double angle, double t, double m0) {
  if (!space.planar_rotation_symmetric()) throw UnsupportedError("orbit fraction needs a rotation-symmetric plane");
  if (t == 0.0) return 1.0;
  const SpacePoint base = space.polar_point(x, angle, t);
  auto gap = [&](double delta) { return space.distance(base, space.polar_point(x, angle + delta, t)); };
  const double pi = std::numbers::pi;
  if (gap(pi) < m0) return 1.0;
  // The distance between time-t points grows with the angle between them.
  double lo = 0.0;
  double hi = pi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) < m0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi) / pi;
}

SeparationResult separation_fraction(const ModelSpace& space, const SpacePoint& x, double r, double t, double m0,
                                     std::size_t n, std::uint64_t seed, int workers, double k) {
  if (!(m0 > 0.0)) throw ParameterError("separation threshold must be > 0");
  if (!(t >= 0.0 && t <= r)) throw ParameterError("time must satisfy 0 <= t <= r");
  check_shell(space, r, k);
  check_count(n);
  space.validate(x);
  if (!space.is_continuum() && t != std::round(t)) throw ParameterError("tree times must be integers");
  const bool orbit = space.planar_rotation_symmetric();
  std::vector<double> raw(n);
  std::vector<double> integrated(orbit ? n : 0);
  parallel_for(n, workers, [&](std::size_t i) {
    StreamRng rng(seed, i);
    const SpacePoint y = sample_shell_point(space, x, r, k, rng);
    const SpacePoint z = sample_shell_point(space, x, r, k, rng);
    if (t == 0.0) {
      raw[i] = 1.0;
      if (orbit) integrated[i] = 1.0;
      return;
    }
    const SpacePoint yt = space.geodesic_point(x, y, t);
    const SpacePoint zt = space.geodesic_point(x, z, t);
    raw[i] = space.distance(yt, zt) < m0 ? 1.0 : 0.0;
    if (orbit) integrated[i] = orbit_fraction(space, x, space.direction_of(x, y), t, m0);
  });
  const std::string base = canonical({space.describe(), to_string(x), num(r), num(k), num(t), num(m0),
                                      std::to_string(n), std::to_string(seed)});
  SeparationResult out;
  out.raw = summarize(raw, r, k, seed, "separation-raw|" + base);
  out.orbit_integrated = orbit;
  out.fraction = orbit ? summarize(integrated, r, k, seed, "separation|" + base) : out.raw;
  return out;
}

double default_probe_step(double c) { return c > 0.0 ? std::min(0.05, c / 20.0) : 0.05; }

std::vector<SpacePoint> segment_grid(const ModelSpace& space, const SpacePoint& u, const SpacePoint& v, double a,
                                     double b, double ds) {
  std::vector<SpacePoint> out;
  for (double t : grid_times(space, a, b, ds)) out.push_back(space.geodesic_point(u, v, t));
  return out;
}

ProbeResult thin_triangle_probe(const ModelSpace& space, const SpacePoint& x, const SpacePoint& y,
                                const SpacePoint& z, double s1, double s2, double c, double ds) {
  const auto g = probe_grids(space, x, y, z, s1, s2, c, ds);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : g.interval) best = std::min(best, probe_point(space, p, g));
  return {best <= c + kHitTolerance, best};
}

double near_fraction(const ModelSpace& space, const SpacePoint& x, const SpacePoint& y, const SpacePoint& z,
                     double s1, double s2, double c, double ds) {
  const auto g = probe_grids(space, x, y, z, s1, s2, c, ds);
  std::size_t near = 0;
  for (const auto& p : g.interval)
    if (probe_point(space, p, g) <= c + kHitTolerance) ++near;
  return static_cast<double>(near) / static_cast<double>(g.interval.size());
}

SamplePath discretize_geodesic(const ModelSpace& space, const Net& net, double tau, const SpacePoint& x,
                               const SpacePoint& y) {
  if (!space.is_continuum()) throw UnsupportedError("discretization needs a continuum model");
  if (net.points.empty()) throw CoverageError("net is empty");
  const double c = net.separation;
  if (!(tau > 4.0 * c)) throw ParameterError("tau must exceed 4c");
  const double spacing = tau - 2.0 * net.covering_radius;
  if (!(spacing > 0.0)) throw ParameterError("tau must exceed twice the covering radius");
  space.validate(x);
  space.validate(y);

  SamplePath path;
  path.tau = tau;
  path.c = c;
  const double length = space.distance(x, y);
  for (std::size_t j = 0;; ++j) {
    const double s = static_cast<double>(j) * spacing;
    if (j > 0 && s >= length - 1e-12 * std::max(1.0, length)) break;
    path.mark_times.push_back(s);
  }
  path.mark_times.push_back(length);
  for (double s : path.mark_times) {
    SpacePoint mark = s == 0.0 ? x : (s == length ? y : space.geodesic_point(x, y, s));
    const std::size_t idx = nearest_net_point(space, net, mark);
    const double d = space.distance(mark, net.points[idx]);
    if (d > net.covering_radius + 1e-9) {
      std::ostringstream msg;
      msg << "net does not cover the segment: mark at time " << s << " is " << d << " from the net";
      throw CoverageError(msg.str());
    }
    path.marks.push_back(std::move(mark));
    path.net_indices.push_back(idx);
    path.points.push_back(net.points[idx]);
  }
  return path;
}

std::optional<double> reference_sphere_E(const ModelSpace& space, double r) {
  if (!(r > 0.0)) throw ParameterError("radius must be > 0");
  switch (space.kind()) {
    case SpaceKind::euclidean:
      if (space.dimension() == 2 && space.norm_exponent() == 2.0) return 4.0 / std::numbers::pi;
      return std::nullopt;
    case SpaceKind::hyperbolic_plane:
    case SpaceKind::modular_torus: {
      // Modular spheres are hyperbolic spheres until they wrap around the cusp.
      if (space.kind() == SpaceKind::modular_torus) return std::nullopt;
      const double sr = std::sinh(r);
      auto f = [&](double a) { return 2.0 * std::asinh(sr * std::sin(0.5 * a)) / r; };
      return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 15, 1e-13) /
             std::numbers::pi;
    }
    case SpaceKind::regular_tree: {
      const double q = space.valence();
      const auto radius = static_cast<long>(std::lround(r));
      // Two uniform sphere points share a prefix of length l with probability
      // p_l; they are then 2 (r - l) apart.
      double sum = 0.0;
      double reach = 1.0;  // probability that the first l letters agree
      for (long l = 0; l < radius; ++l) {
        const double agree_next = l == 0 ? 1.0 / q : 1.0 / (q - 1.0);
        sum += reach * (1.0 - agree_next) * 2.0 * static_cast<double>(radius - l);
        reach *= agree_next;
      }
      return sum / r;
    }
    case SpaceKind::sup_product: return std::nullopt;
  }
  return std::nullopt;
}

double thick_area_fraction(double eps) {
  if (!(eps > 0.0)) throw ParameterError("thickness parameter must be > 0");
  const double height = 1.0 / (eps * eps);
  // Column over Re z = x runs from the unit circle up to the cusp.
  auto below = [&](double x) {
    const double floor = std::sqrt(1.0 - x * x);
    return height > floor ? 1.0 / floor - 1.0 / height : 0.0;
  };
  auto total = [&](double x) { return 1.0 / std::sqrt(1.0 - x * x); };
  using quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  return quad::integrate(below, -0.5, 0.5, 15, 1e-13) / quad::integrate(total, -0.5, 0.5, 15, 1e-13);
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& fractions) {
  if (times.size() != fractions.size() || times.size() < 2) throw ParameterError("need at least two decay samples");
  std::vector<double> lt, lf;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(fractions[i] > 0.0) || !(times[i] > 0.0)) throw DomainError("decay fit needs positive times and fractions");
    lt.push_back(std::log(times[i]));
    lf.push_back(std::log(fractions[i]));
  }
  return {fit_line(times, lf), fit_line(lt, lf)};
}

}  // namespace stathyp
