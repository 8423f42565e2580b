#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "stathyp/hyperbolic.hpp"

using namespace stathyp;

namespace {

Complex random_point(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> re(-5.0, 5.0), logim(-6.0, 4.0);
  return {re(gen), std::exp(logim(gen))};
}

double arccosh_distance(Complex u, Complex v) {
  return std::acosh(1.0 + std::norm(u - v) / (2.0 * u.imag() * v.imag()));
}

}  // namespace

TEST(Hyperbolic, VerticalDistance) {
  EXPECT_NEAR(hyperbolic_distance({0, 1}, {0, 4}), std::log(4.0), 1e-12);
  EXPECT_NEAR(arccosh_distance({0, 1}, {0, 4}), 1.386294, 1e-6);
  EXPECT_EQ(hyperbolic_distance({0.3, 2.0}, {0.3, 2.0}), 0.0);
}

TEST(Hyperbolic, MatchesArccoshForm) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 2000; ++i) {
    const Complex u = random_point(gen), v = random_point(gen);
    const double ref = arccosh_distance(u, v);
    if (ref < 1e-3) continue;  // arccosh form loses digits there
    EXPECT_NEAR(hyperbolic_distance(u, v), ref, 1e-9 * std::max(1.0, ref));
  }
}

TEST(Hyperbolic, SmallDistancesKeepPrecision) {
  const Complex u(0.0, 1.0), v(1e-10, 1.0);
  EXPECT_NEAR(hyperbolic_distance(u, v), 1e-10, 1e-20);
}

TEST(Hyperbolic, GeneratorsHaveUnitDeterminant) {
  for (const Sl2& g : {Sl2::rotation(0.7), Sl2::lift(3.1), Sl2::affine_to({2.0, 0.5}), Sl2::inversion()})
    EXPECT_NEAR(g.det(), 1.0, 1e-12);
  const Complex i(0.0, 1.0);
  EXPECT_NEAR(std::abs(Sl2::rotation(1.3).apply(i) - i), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(Sl2::lift(std::log(3.0)).apply(i) - Complex(0, 3)), 0.0, 1e-12);
}

TEST(Hyperbolic, FrameFlowIsUnitSpeed) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586), len(0.0, 15.0);
  for (int i = 0; i < 500; ++i) {
    const Complex z = random_point(gen);
    const Frame f = Frame::at(z, ang(gen));
    const double s = len(gen), t = len(gen);
    EXPECT_NEAR(hyperbolic_distance(f.flowed(s).point(), f.flowed(t).point()), std::abs(s - t), 1e-8);
  }
}

TEST(Hyperbolic, TowardReachesTarget) {
  std::mt19937_64 gen(6);
  for (int i = 0; i < 500; ++i) {
    const Complex u = random_point(gen), v = random_point(gen);
    const double d = hyperbolic_distance(u, v);
    const Complex w = Frame::toward(u, v).flowed(d).point();
    EXPECT_LT(hyperbolic_distance(w, v), 1e-7);
    EXPECT_NEAR(direction_angle(u, v), std::remainder(direction_angle(u, v), 2 * M_PI), 1e-12);
  }
}

TEST(Modular, ReduceExamples) {
  const auto a = reduce_modular({0.0, 1.0});
  EXPECT_EQ(a.reduced, Complex(0.0, 1.0));
  EXPECT_TRUE(a.word.empty());

  const auto b = reduce_modular({0.1, 10.0});
  EXPECT_EQ(b.reduced, Complex(0.1, 10.0));
  EXPECT_TRUE(b.word.empty());

  const auto c = reduce_modular({2.3, 0.5});
  EXPECT_LE(std::abs(c.reduced.real()), 0.5 + 1e-12);
  EXPECT_GE(std::abs(c.reduced), 1.0 - 1e-12);
  EXPECT_FALSE(c.word.empty());
}

TEST(Modular, ReductionRoundTrip) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> re(-50.0, 50.0), logim(-8.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const Complex z(re(gen), std::exp(logim(gen)));
    const auto red = reduce_modular(z);
    ASSERT_TRUE(in_fundamental_domain(red.reduced, 1e-9)) << z;
    const Complex back = unreduce(red.word, red.reduced);
    EXPECT_LT(std::abs(back - z), 1e-9 * std::max(1.0, std::abs(z))) << z;
    // The accumulated matrix is the composite of the word.
    EXPECT_LT(std::abs(red.matrix.apply(z) - red.reduced), 1e-9 * std::max(1.0, std::abs(red.reduced)));
  }
}

TEST(Modular, ReductionPreservesDistanceToOrbit) {
  // SL(2,Z) acts by isometries.
  const Complex u(2.3, 0.5), v(-1.7, 0.2);
  const auto red = reduce_modular(u);
  EXPECT_NEAR(hyperbolic_distance(red.matrix.apply(u), red.matrix.apply(v)), hyperbolic_distance(u, v), 1e-9);
}
