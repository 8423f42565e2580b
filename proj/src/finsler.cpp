#include "stathyp/finsler.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "stathyp/errors.hpp"

namespace stathyp {

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

namespace {

constexpr std::size_t kBatch = 1 << 16;

VolumeEstimate exact_volume(const ConvexBody& body) {
  const int n = body.dimension();
  switch (body.kind()) {
    case BodyKind::polytope: return {volume_from_facets(body.facets(), n), 0.0, 0};
    case BodyKind::ellipsoid: {
      double v = unit_ball_volume(n);
      for (double a : body.semi_axes()) v *= a;
      return {v, 0.0, 0};
    }
    case BodyKind::lp_ball: {
      const double p = body.exponent();
      if (std::isinf(p)) return {std::pow(2.0, n), 0.0, 0};
      const double v = std::exp(n * std::log(2.0) + n * std::lgamma(1.0 + 1.0 / p) - std::lgamma(1.0 + n / p));
      return {v, 0.0, 0};
    }
    case BodyKind::oracle: break;
  }
  throw UnsupportedError("exact volume is not available for oracle bodies");
}

VolumeEstimate monte_carlo_volume(const ConvexBody& body, const VolumeMethod& method) {
  const auto n = static_cast<std::size_t>(body.dimension());
  if (n > 6) throw UnsupportedError("Monte Carlo volumes are limited to dimension <= 6");
  RealVector half(n);
  RealVector e(n, 0.0);
  double box = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    e.assign(n, 0.0);
    e[i] = 1.0;
    half[i] = body.support(e);
    box *= 2.0 * half[i];
  }
  std::size_t hits = 0, total = 0;
  RealVector x(n);
  for (std::uint64_t batch = 0; total < method.max_samples; ++batch) {
    StreamRng rng(method.seed, batch);
    for (std::size_t s = 0; s < kBatch; ++s) {
      for (std::size_t i = 0; i < n; ++i) x[i] = half[i] * (2.0 * rng.uniform() - 1.0);
      hits += body.contains(x) ? 1 : 0;
    }
    total += kBatch;
    if (hits > 0) {
      const double frac = static_cast<double>(hits) / static_cast<double>(total);
      const double rel = std::sqrt((1.0 - frac) / (frac * static_cast<double>(total)));
      if (rel <= method.target_rel_error) break;
    }
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(total);
  return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(total)), total};
}

}  // namespace

VolumeEstimate volume(const ConvexBody& body, const VolumeMethod& method) {
  if (method.kind == VolumeMethod::Kind::exact) return exact_volume(body);
  return monte_carlo_volume(body, method);
}

ConvexBody polar(const ConvexBody& body) {
  const int n = body.dimension();
  switch (body.kind()) {
    case BodyKind::ellipsoid: {
      RealVector inv(body.semi_axes());
      for (auto& a : inv) a = 1.0 / a;
      return ConvexBody::ellipsoid(std::move(inv));
    }
    case BodyKind::lp_ball: {
      const double p = body.exponent();
      const double q = p == 1.0 ? std::numeric_limits<double>::infinity() : std::isinf(p) ? 1.0 : p / (p - 1.0);
      return ConvexBody::lp_ball(n, q);
    }
    case BodyKind::polytope:
    case BodyKind::oracle: break;
  }
  // xi is in the polar body iff h_K(xi) <= 1; for polytopes that is the max
  // over vertices. The support function of the polar body is the gauge of K.
  auto shared = std::make_shared<const ConvexBody>(body);
  return ConvexBody::oracle(
      n, [shared](std::span<const double> xi) { return shared->support(xi) <= 1.0; },
      [shared](std::span<const double> u) { return shared->gauge(u); }, 1.0 / body.inner_radius(),
      1.0 / body.bounding_radius());
}

VolumeEstimate polar_volume(const ConvexBody& body, const VolumeMethod& method) {
  if (method.kind == VolumeMethod::Kind::exact && body.kind() == BodyKind::polytope)
    return exact_volume(ConvexBody::polytope(body.polar_vertices()));
  return volume(polar(body), method);
}

MahlerReport mahler(const ConvexBody& body, const VolumeMethod& method) {
  const int n = body.dimension();
  const auto v = volume(body, method);
  VolumeMethod polar_method = method;
  polar_method.seed = method.seed ^ 0x5bd1e995ULL;
  const auto w = polar_volume(body, polar_method);
  MahlerReport r;
  r.value = v.value * w.value;
  r.std_error = std::hypot(w.value * v.std_error, v.value * w.std_error);
  const double eps = unit_ball_volume(n);
  r.upper = eps * eps;
  r.lower = r.upper / std::pow(static_cast<double>(n), 0.5 * n);
  const double slack = 3.0 * r.std_error + 1e-12 * r.upper;
  r.lower_ok = r.value >= r.lower - slack;
  r.upper_ok = r.value <= r.upper + slack;
  return r;
}

VolumeEstimate busemann_density(const ConvexBody& body, const VolumeMethod& method) {
  const auto v = volume(body, method);
  const double eps = unit_ball_volume(body.dimension());
  return {eps / v.value, eps * v.std_error / (v.value * v.value), v.samples};
}

VolumeEstimate holmes_thompson_density(const ConvexBody& body, const VolumeMethod& method) {
  const auto w = polar_volume(body, method);
  const double eps = unit_ball_volume(body.dimension());
  return {w.value / eps, w.std_error / eps, w.samples};
}

DensityPair densities(const ConvexBody& body, const VolumeMethod& method) {
  DensityPair d;
  const auto f = busemann_density(body, method);
  VolumeMethod polar_method = method;
  polar_method.seed = method.seed ^ 0x5bd1e995ULL;
  const auto g = holmes_thompson_density(body, polar_method);
  d.busemann = f.value;
  d.busemann_error = f.std_error;
  d.holmes_thompson = g.value;
  d.holmes_thompson_error = g.std_error;
  d.ratio = f.value / g.value;
  d.ratio_error = d.ratio * std::hypot(f.std_error / f.value, g.std_error / g.value);
  return d;
}

ConvexBody random_symmetric_polytope(int n, StreamRng& rng) {
  std::uniform_int_distribution<int> count(4, 40);
  std::normal_distribution<double> gauss;
  const int k = count(rng);
  // Symmetrized points may fail to span (tiny k in R^3); redraw until they do.
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<RealVector> pts;
    for (int i = 0; i < k; ++i) {
      RealVector v(static_cast<std::size_t>(n));
      double len = 0.0;
      while (len == 0.0) {
        for (auto& x : v) x = gauss(rng);
        len = 0.0;
        for (double x : v) len += x * x;
        len = std::sqrt(len);
      }
      for (auto& x : v) x /= len;
      pts.push_back(std::move(v));
    }
    try {
      return ConvexBody::polytope(std::move(pts));
    } catch (const ParameterError&) {
    }
  }
  throw ParameterError("could not draw a full-dimensional random polytope");
}

ConvexBody random_ellipsoid(int n, StreamRng& rng) {
  RealVector axes(static_cast<std::size_t>(n));
  for (auto& a : axes) a = std::exp(std::log(0.2) + rng.uniform() * std::log(25.0));
  return ConvexBody::ellipsoid(std::move(axes));
}

}  // namespace stathyp
