#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stathyp/errors.hpp"
#include "stathyp/finsler.hpp"

using namespace stathyp;

namespace {

constexpr double kPi = std::numbers::pi;

const VolumeMethod kExact = VolumeMethod::exact();

ConvexBody square() { return ConvexBody::polytope({{1.0, 1.0}, {1.0, -1.0}}); }
ConvexBody disk() { return ConvexBody::ellipsoid({1.0, 1.0}); }

RealVector random_probe(std::mt19937_64& gen, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  RealVector v(static_cast<std::size_t>(n));
  for (auto& c : v) c = u(gen);
  return v;
}

}  // namespace

TEST(Volume, ExactExamples) {
  EXPECT_NEAR(volume(disk(), kExact).value, kPi, 1e-12);
  EXPECT_NEAR(volume(square(), kExact).value, 4.0, 1e-12);
  const auto cross = ConvexBody::polytope({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_NEAR(volume(cross, kExact).value, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(volume(ConvexBody::lp_ball(3, 1.0), kExact).value, 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(volume(ConvexBody::lp_ball(3, INFINITY), kExact).value, 8.0, 1e-12);
  EXPECT_NEAR(volume(ConvexBody::ellipsoid({1, 2, 3}), kExact).value, 4.0 / 3.0 * kPi * 6.0, 1e-10);
  for (int n = 1; n <= 6; ++n)
    EXPECT_NEAR(unit_ball_volume(n), std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0), 1e-12);
}

TEST(Volume, MonteCarloAgreesWithExact) {
  for (const auto& body : {ConvexBody::ellipsoid({0.5, 1.0, 2.0}), ConvexBody::lp_ball(2, 3.0),
                           ConvexBody::polytope({{1, 0.2, 0}, {0, 1, 0.3}, {0.1, 0, 1}, {0.5, 0.5, 0.5}})}) {
    const auto exact = volume(body, kExact);
    const auto mc = volume(body, VolumeMethod::monte_carlo(21));
    EXPECT_GT(mc.samples, 0u);
    EXPECT_LE(mc.std_error / mc.value, 1.1e-3);
    EXPECT_NEAR(mc.value, exact.value, 4.0 * mc.std_error);
  }
}

TEST(Volume, OracleHasNoExactPath) {
  EXPECT_THROW(volume(polar(square()), kExact), UnsupportedError);
  const auto mc = volume(polar(square()), VolumeMethod::monte_carlo(2));
  EXPECT_NEAR(mc.value, 2.0, 4.0 * mc.std_error);
}

TEST(Polar, Examples) {
  const auto pd = polar(disk());
  ASSERT_EQ(pd.kind(), BodyKind::ellipsoid);
  EXPECT_EQ(pd.semi_axes(), (RealVector{1.0, 1.0}));

  const auto pe = polar(ConvexBody::ellipsoid({2.0, 0.5}));
  EXPECT_EQ(pe.semi_axes(), (RealVector{0.5, 2.0}));

  const auto pl = polar(ConvexBody::lp_ball(3, 1.0));
  EXPECT_TRUE(std::isinf(pl.exponent()));
  EXPECT_NEAR(polar(ConvexBody::lp_ball(2, 3.0)).exponent(), 1.5, 1e-15);

  // Square -> diamond |x| + |y| <= 1.
  const auto ps = polar(square());
  std::mt19937_64 gen(1);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_probe(gen, 2, 1.5);
    const double l1 = std::abs(p[0]) + std::abs(p[1]);
    if (std::abs(l1 - 1.0) < 1e-9) continue;
    ASSERT_EQ(ps.contains(p), l1 < 1.0) << p[0] << ' ' << p[1];
  }
  EXPECT_NEAR(polar_volume(square(), kExact).value, 2.0, 1e-12);
}

TEST(Polar, BipolarMembership) {
  std::mt19937_64 gen(2);
  StreamRng rng(2, 0);
  for (int n : {2, 3}) {
    const auto body = random_symmetric_polytope(n, rng);
    const auto bipolar = polar(polar(body));
    for (int i = 0; i < 10000; ++i) {
      const auto p = random_probe(gen, n, 1.3);
      if (std::abs(body.gauge(p) - 1.0) < 1e-6) continue;
      ASSERT_EQ(bipolar.contains(p), body.contains(p));
    }
  }
}

TEST(Polar, Monotonicity) {
  // square subset of the disk of radius sqrt 2.
  const auto small = square();
  const auto big = ConvexBody::ellipsoid({std::sqrt(2.0), std::sqrt(2.0)});
  EXPECT_LE(volume(small, kExact).value, volume(big, kExact).value);
  const auto ps = polar(small), pb = polar(big);
  std::mt19937_64 gen(3);
  for (int i = 0; i < 10000; ++i) {
    const auto p = random_probe(gen, 2, 1.2);
    if (pb.contains(p)) ASSERT_TRUE(ps.contains(p));
  }
}

TEST(Mahler, Examples) {
  const auto d = mahler(disk(), kExact);
  EXPECT_NEAR(d.value, kPi * kPi, 1e-12);
  EXPECT_NEAR(d.value, d.upper, 1e-12);
  EXPECT_TRUE(d.ok());

  const auto s = mahler(square(), kExact);
  EXPECT_NEAR(s.value, 8.0, 1e-12);
  EXPECT_NEAR(s.lower, kPi * kPi / 2.0, 1e-12);
  EXPECT_TRUE(s.ok());
}

TEST(Mahler, RandomPolytopesWithinBounds) {
  for (int n : {2, 3}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      StreamRng rng(77, i);
      const auto body = random_symmetric_polytope(n, rng);
      const auto m = mahler(body, kExact);
      ASSERT_TRUE(m.ok()) << "n=" << n << " i=" << i << " M=" << m.value;
    }
  }
}

TEST(Mahler, MonteCarloMatchesExact) {
  StreamRng rng(8, 0);
  const auto body = random_symmetric_polytope(2, rng);
  const auto exact = mahler(body, kExact);
  const auto mc = mahler(body, VolumeMethod::monte_carlo(5));
  EXPECT_NEAR(mc.value, exact.value, 4.0 * mc.std_error);
  EXPECT_TRUE(mc.ok());
}

TEST(Densities, Examples) {
  const double ball = busemann_density(ConvexBody::ellipsoid({1, 1, 1}), kExact).value;
  EXPECT_NEAR(ball, 1.0, 1e-12);
  EXPECT_NEAR(holmes_thompson_density(ConvexBody::ellipsoid({1, 1, 1}), kExact).value, 1.0, 1e-12);

  const auto sup = ConvexBody::lp_ball(2, INFINITY);
  EXPECT_NEAR(busemann_density(sup, kExact).value, kPi / 4.0, 1e-12);
  EXPECT_NEAR(holmes_thompson_density(sup, kExact).value, 2.0 / kPi, 1e-12);

  const auto l1 = ConvexBody::lp_ball(2, 1.0);
  EXPECT_NEAR(busemann_density(l1, kExact).value, kPi / 2.0, 1e-12);
  EXPECT_NEAR(holmes_thompson_density(l1, kExact).value, 4.0 / kPi, 1e-12);

  // Same numbers through the polytope representation.
  EXPECT_NEAR(densities(square(), kExact).ratio, kPi * kPi / 8.0, 1e-12);
}

TEST(Densities, SandwichAndMahlerIdentity) {
  for (int n : {2, 3}) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      StreamRng rng(31, i);
      const auto body = i % 2 ? random_symmetric_polytope(n, rng) : random_ellipsoid(n, rng);
      const auto dp = densities(body, kExact);
      EXPECT_GE(dp.ratio, 1.0 - 1e-12);
      EXPECT_LE(dp.ratio, std::pow(n, n / 2.0) + 1e-12);
      const double eps = unit_ball_volume(n);
      EXPECT_NEAR(mahler(body, kExact).value, eps * eps * dp.holmes_thompson / dp.busemann, 1e-9);
      if (body.kind() == BodyKind::ellipsoid) EXPECT_NEAR(dp.ratio, 1.0, 1e-12);
    }
  }
}

TEST(Densities, MonteCarloErrorsReported) {
  const auto dp = densities(ConvexBody::lp_ball(3, 4.0), VolumeMethod::monte_carlo(4));
  EXPECT_GT(dp.busemann_error, 0.0);
  EXPECT_GT(dp.ratio_error, 0.0);
  EXPECT_GE(dp.ratio + 3.0 * dp.ratio_error, 1.0);
  const auto exact = densities(ConvexBody::lp_ball(3, 4.0), kExact);
  EXPECT_NEAR(dp.ratio, exact.ratio, 4.0 * dp.ratio_error);
}

TEST(ConvexBody, Preconditions) {
  EXPECT_THROW(ConvexBody::ellipsoid({1.0, 0.0}), ParameterError);
  EXPECT_THROW(ConvexBody::lp_ball(2, 0.5), ParameterError);
  EXPECT_THROW(ConvexBody::polytope({{1, 0, 0, 0}}), UnsupportedError);
  EXPECT_THROW(ConvexBody::polytope({{1, 0}, {2, 0}}), ParameterError);
  EXPECT_THROW(volume(ConvexBody::ellipsoid({1, 1, 1, 1, 1, 1, 1}), VolumeMethod::monte_carlo(0)), UnsupportedError);
}

TEST(Hull, PolarsOfManyRandomPolytopes) {
  // Dual vertices of nearly coplanar facets nearly coincide; the hull must
  // still come out convex with the origin inside.
  for (std::uint64_t i = 0; i < 1000; ++i) {
    StreamRng rng(0, i);
    const auto body = random_symmetric_polytope(3, rng);
    const auto dual = body.polar_vertices();
    const auto facets = convex_hull_facets(dual);
    ASSERT_LE(facets.size(), 2 * dual.size() - 4) << i;
    for (const auto& f : facets) ASSERT_GT(f.offset, 0.0) << i;
    for (const auto& v : dual)
      for (const auto& f : facets) ASSERT_LE(v[0] * f.normal[0] + v[1] * f.normal[1] + v[2] * f.normal[2], f.offset + 1e-9);
  }
}

TEST(Hull, NearlyCoplanarPoints) {
  // Cube corners plus points a hair above and below the face centres.
  std::vector<RealVector> pts;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1}) pts.push_back({double(a), double(b), double(c)});
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-0.9, 0.9), tiny(-1e-13, 1e-13);
  for (int k = 0; k < 300; ++k) {
    const int axis = k % 3;
    RealVector p{u(gen), u(gen), u(gen)};
    p[static_cast<std::size_t>(axis)] = (k % 2 ? 1.0 : -1.0) + tiny(gen);
    pts.push_back(p);
  }
  const auto facets = convex_hull_facets(pts);
  EXPECT_NEAR(volume_from_facets(facets, 3), 8.0, 1e-9);
  for (const auto& f : facets) EXPECT_NEAR(f.offset, 1.0, 1e-9);
}
