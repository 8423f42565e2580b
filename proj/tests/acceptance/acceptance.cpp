// Acceptance run: one PASS/FAIL line per criterion. Reference values come from
// oracles computed here (enumeration, quadrature, closed forms), not from the
// library's own reference helpers.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "stathyp/coarse.hpp"
#include "stathyp/convex_body.hpp"
#include "stathyp/finsler.hpp"
#include "stathyp/net.hpp"
#include "stathyp/numeric.hpp"
#include "stathyp/rng.hpp"
#include "stathyp/statistics.hpp"

using namespace stathyp;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances and budgets.
constexpr double kE2Tol = 0.005;
constexpr double kE2Seconds = 30.0;
constexpr double kHypMinAt40 = 1.90;
constexpr double kHypSeconds = 120.0;
constexpr double kSigmas = 3.0;
constexpr double kDiskTol = 1e-6;
constexpr double kSquareRelTol = 1e-12;
constexpr double kMahlerSeconds = 60.0;
constexpr double kDensityTol = 1e-3;
constexpr double kSandwichSeconds = 10.0;
constexpr double kSlopeMin = -1.3, kSlopeMax = -0.7;
constexpr double kThickTol = 0.02;
constexpr double kP1Min = 0.9;
constexpr double kReductionTol = 0.02;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  void fail(const std::string& what) {
    pass_ = false;
    add("FAILED " + what);
  }
  void require(bool ok, const std::string& what) {
    if (ok) add(what);
    else fail(what);
  }
  void add(const std::string& what) { text_ += (text_.empty() ? "" : "; ") + what; }
  Outcome outcome() const { return {pass_, text_}; }

 private:
  bool pass_ = true;
  std::string text_;
};

std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

// Composite Simpson rule with m (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Mean of d(y, z) / r on the hyperbolic circle of radius r: for an angle a
// between y and z, cosh d = cosh^2 r - sinh^2 r cos a, i.e.
// sinh(d/2) = sinh r sin(a/2).
double hyperbolic_sphere_oracle(double r) {
  return simpson([r](double a) { return 2.0 * std::asinh(std::sinh(r) * std::sin(a / 2.0)) / r; }, 0.0, kPi,
                 20000) /
         kPi;
}

// Exhaustive mean over ordered pairs of the q-regular tree sphere.
double tree_sphere_oracle(int q, int r, std::size_t* pairs = nullptr) {
  std::vector<std::string> sphere{""};
  for (int step = 0; step < r; ++step) {
    std::vector<std::string> next;
    for (const auto& w : sphere)
      for (int i = 0; i < q; ++i) {
        const char c = static_cast<char>('a' + i);
        if (w.empty() || w.back() != c) next.push_back(w + c);
      }
    sphere.swap(next);
  }
  double sum = 0.0;
  for (const auto& y : sphere)
    for (const auto& z : sphere) {
      std::size_t l = 0;
      while (l < y.size() && y[l] == z[l]) ++l;
      sum += 2.0 * static_cast<double>(y.size() - l);
    }
  if (pairs) *pairs = sphere.size() * sphere.size();
  return sum / (static_cast<double>(sphere.size() * sphere.size()) * r);
}

// Upper half-plane annulus distance in long double (heights up to ~1e4).
long double annulus_oracle(long double a, long double b, long double twist) {
  const long double s1 = std::sinh(std::fabs(a - b) / 2.0L);
  const long double s2 = twist / (2.0L * std::exp((a + b) / 2.0L));
  return 2.0L * std::asinh(std::sqrt(s1 * s1 + s2 * s2));
}

double lplus(double a) { return a > 1.0 ? std::log(a) : 0.0; }
double cut(double v, double m) { return v >= m ? v : 0.0; }

struct LineFit {
  double slope = 0.0;
  double rss = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) f.rss += std::pow(y[i] - icpt - f.slope * x[i], 2);
  return f;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome euclidean_plane() {
  Detail d;
  const auto t0 = std::chrono::steady_clock::now();
  const auto e2 = ModelSpace::euclidean(2);
  const auto res = estimate_E(e2, e2.basepoint(), 1.0, 0.0, 1000000, 42, default_workers());
  const double secs = seconds_since(t0);
  d.require(std::abs(res.mean - 1.273240) <= kE2Tol, "E(R^2) = " + num(res.mean) + " vs 4/pi");
  d.require(secs < kE2Seconds, "runtime " + num(secs, 3) + "s");
  for (int n = 2; n <= 4; ++n) {
    const auto en = ModelSpace::euclidean(n);
    const auto r = estimate_E(en, en.basepoint(), 1.0, 0.0, 100000, 100 + n, default_workers());
    d.require(r.mean < std::sqrt(2.0), "E(R^" + std::to_string(n) + ") = " + num(r.mean) + " < sqrt 2");
  }
  return d.outcome();
}

Outcome hyperbolic_plane() {
  Detail d;
  const auto t0 = std::chrono::steady_clock::now();
  const auto h = ModelSpace::hyperbolic_plane();
  std::vector<double> means;
  for (double r : {10.0, 20.0, 40.0}) {
    const auto res = estimate_E(h, h.basepoint(), r, 0.0, 100000, 2000 + static_cast<int>(r), default_workers());
    const double oracle = hyperbolic_sphere_oracle(r);
    d.require(std::abs(res.mean - oracle) <= kSigmas * res.std_error,
              "r=" + num(r) + ": " + num(res.mean) + " vs integral " + num(oracle));
    means.push_back(res.mean);
  }
  d.require(means[0] < means[1] && means[1] < means[2], "strictly increasing");
  d.require(means[2] >= kHypMinAt40, "E at r=40 >= 1.90");
  const double secs = seconds_since(t0);
  d.require(secs < kHypSeconds, "runtime " + num(secs, 3) + "s");
  return d.outcome();
}

Outcome tree_exactness() {
  Detail d;
  std::size_t pairs = 0;
  const double exact2 = tree_sphere_oracle(3, 2, &pairs);
  d.require(pairs == 36 && exact2 == 1.5, "r=2 enumeration of " + std::to_string(pairs) + " pairs gives " +
                                              num(exact2));
  const auto t = ModelSpace::regular_tree(3);
  int agree = 0;
  for (int r = 1; r <= 8; ++r) {
    const double oracle = tree_sphere_oracle(3, r);
    const auto res = estimate_E(t, t.basepoint(), r, 0, 100000, 300 + r, default_workers());
    if (std::abs(res.mean - oracle) <= kSigmas * res.std_error) ++agree;
    else d.fail("r=" + std::to_string(r) + ": " + num(res.mean) + " vs " + num(oracle));
  }
  d.add(std::to_string(agree) + "/8 radii within 3 std errors");
  return d.outcome();
}

Outcome mahler_suite() {
  Detail d;
  const auto t0 = std::chrono::steady_clock::now();
  const auto exact = VolumeMethod::exact();
  const auto disk = mahler(ConvexBody::lp_ball(2, 2.0), exact);
  d.require(std::abs(disk.value - kPi * kPi) <= kDiskTol, "disk " + num(disk.value, 12));
  const auto square = mahler(ConvexBody::polytope({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}), exact);
  d.require(std::abs(square.value - 8.0) <= kSquareRelTol * 8.0, "square " + num(square.value, 15));
  for (int n : {2, 3}) {
    // eps_n: area of the unit disk, volume of the unit ball.
    const double eps = n == 2 ? kPi : 4.0 * kPi / 3.0;
    const double upper = eps * eps, lower = upper / std::pow(n, n / 2.0);
    std::vector<double> bad(1000);
    parallel_for(bad.size(), default_workers(), [&](std::size_t i) {
      StreamRng rng(4000 + n, i);
      const auto m = mahler(random_symmetric_polytope(n, rng), exact);
      const double slack = kSigmas * m.std_error + 1e-12 * upper;
      bad[i] = (m.value < lower - slack || m.value > upper + slack) ? 1.0 : 0.0;
    });
    const double violations = pairwise_sum(bad);
    d.require(violations == 0.0, "n=" + std::to_string(n) + ": " + num(violations) + " violations in 1000");
  }
  const double secs = seconds_since(t0);
  d.require(secs < kMahlerSeconds, "runtime " + num(secs, 3) + "s");
  return d.outcome();
}

Outcome density_sandwich() {
  Detail d;
  const auto exact = VolumeMethod::exact();
  auto in_sandwich = [](const DensityPair& p, int n) {
    const double slack = kSigmas * p.ratio_error + 1e-12;
    return p.ratio >= 1.0 - slack && p.ratio <= std::pow(n, n / 2.0) + slack;
  };
  double worst = 0.0;
  int outside = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    StreamRng rng(5000, i);
    const int n = 2 + static_cast<int>(i % 3);
    const auto p = densities(random_ellipsoid(n, rng), exact);
    worst = std::max(worst, std::abs(p.ratio - 1.0));
    if (!in_sandwich(p, n)) ++outside;
  }
  d.require(worst <= kDensityTol, "100 ellipsoids: max |f/g - 1| = " + num(worst));
  const auto sup = densities(ConvexBody::lp_ball(2, std::numeric_limits<double>::infinity()), exact);
  d.require(std::abs(sup.ratio - kPi * kPi / 8.0) <= kDensityTol, "sup-norm plane f/g = " + num(sup.ratio, 10));
  if (!in_sandwich(sup, 2)) ++outside;
  // Monte Carlo path and a spread of other bodies.
  const auto mc = VolumeMethod::monte_carlo(77);
  for (double p : {1.0, 1.5, 3.0, 8.0}) {
    for (int n : {2, 3}) {
      if (!in_sandwich(densities(ConvexBody::lp_ball(n, p), exact), n)) ++outside;
      if (!in_sandwich(densities(ConvexBody::lp_ball(n, p), mc), n)) ++outside;
    }
  }
  for (std::size_t i = 0; i < 200; ++i) {
    StreamRng rng(5100, i);
    const int n = 2 + static_cast<int>(i % 2);
    if (!in_sandwich(densities(random_symmetric_polytope(n, rng), exact), n)) ++outside;
  }
  d.require(outside == 0, "1 <= f/g <= n^(n/2) on all 317 bodies (" + std::to_string(outside) + " outside)");
  return d.outcome();
}

Outcome horoball_sandwich_check() {
  Detail d;
  const auto t0 = std::chrono::steady_clock::now();
  double tested = 0, violations = 0, oracle_mismatch = 0, strict = 0, strict_bad = 0;
  for (double l0 : {0.5, 1.0, 5.0, 100.0}) {
    const double scale = 60.0 * l0 + 20.0, floor = 36.0 * l0;
    std::vector<double> bad(25000), off(25000), hit(25000), both_long(25000);
    parallel_for(bad.size(), default_workers(), [&](std::size_t i) {
      StreamRng rng(6000 + static_cast<std::uint64_t>(l0 * 10), i);
      for (int attempt = 0; attempt < 1000000; ++attempt) {
        const auto h = random_horoball_pair(rng, scale, std::min(700.0, scale));
        const double a = std::max(0.0, h.log_inv_length_x()), b = std::max(0.0, h.log_inv_length_y());
        const auto da = static_cast<double>(annulus_oracle(a, b, std::exp(static_cast<long double>(h.log_twist()))));
        const double ha = std::max({std::max(0.0, h.log_twist()), a, b});
        const bool short_both = h.log_inv_length_x() > l0 && h.log_inv_length_y() > l0;
        if (short_both || std::max(da, ha) < floor) continue;
        const auto lib = horoball_sandwich(h, l0);
        off[i] = (!lib.applicable || std::abs(lib.d_a - da) > 1e-9 * std::max(1.0, da)) ? 1.0 : 0.0;
        bad[i] = (da / 6.0 <= ha * (1 + 1e-12) && ha <= 6.0 * da * (1 + 1e-12) && lib.holds) ? 0.0 : 1.0;
        hit[i] = 1.0;
        // Subset with both curves long: min(l_x, l_y) >= eps0.
        both_long[i] = h.log_inv_length_x() <= l0 && h.log_inv_length_y() <= l0 ? 1.0 : 0.0;
        return;
      }
    });
    tested += pairwise_sum(hit);
    violations += pairwise_sum(bad);
    oracle_mismatch += pairwise_sum(off);
    strict += pairwise_sum(both_long);
    for (std::size_t i = 0; i < bad.size(); ++i) strict_bad += bad[i] * both_long[i];
  }
  d.require(tested == 100000.0 && violations == 0.0,
            num(violations) + " sandwich violations in " + num(tested, 8) + " admissible pairs");
  d.require(strict_bad == 0.0, num(strict_bad) + " violations among the " + num(strict, 8) + " pairs with both curves long");
  d.require(oracle_mismatch == 0.0, "library d_A matches the closed form on all pairs");
  double b_tested = 0, b_bad = 0;
  for (std::size_t i = 0; i < 100000; ++i) {
    StreamRng rng(6100, i);
    const double twist = std::exp(std::log(1e-3) + (30.0 - std::log(1e-3)) * rng.uniform());
    const double b = 2.0 * std::asinh(twist / 2.0);
    if (!(b >= 3.0 || twist >= 3.0)) continue;
    ++b_tested;
    const auto lib = twist_inequalities(twist);
    if (!(lplus(twist) <= b * (1 + 1e-12) && b <= 4.0 * lplus(twist) * (1 + 1e-12)) || !lib.holds || !lib.applicable)
      ++b_bad;
  }
  d.require(b_bad == 0.0, num(b_bad) + " B-inequality failures in " + num(b_tested, 8));
  const double secs = seconds_since(t0);
  d.require(secs < kSandwichSeconds, "runtime " + num(secs, 3) + "s");
  return d.outcome();
}

Outcome formula_arithmetic() {
  Detail d;
  const double l0 = 5.0, m0 = 36.0 * l0;
  std::vector<double> chain_bad(100000), maxlog_bad(100000), compare_bad(100000);
  parallel_for(chain_bad.size(), default_workers(), [&](std::size_t i) {
    StreamRng rng(7000, i);
    const auto profile = random_profile(rng, 60.0 * l0 + 20.0);
    double low = 0, mid = 0, high = 0;
    for (const auto& e : profile.entries) {
      if (e.kind != ProfileEntry::Kind::annular) continue;
      const auto& h = e.annulus;
      if (h.log_inv_length_x() > l0 && h.log_inv_length_y() > l0) continue;
      const double a = std::max(0.0, h.log_inv_length_x()), b = std::max(0.0, h.log_inv_length_y());
      const auto da = static_cast<double>(annulus_oracle(a, b, std::exp(static_cast<long double>(h.log_twist()))));
      const double ha = std::max({std::max(0.0, h.log_twist()), a, b});
      low += cut(da, 6.0 * m0) / 6.0;
      mid += cut(ha, m0);
      high += 6.0 * cut(da, m0 / 6.0);
    }
    const auto lib = horoball_chain(profile, m0, l0);
    const double tol = 1e-9 * std::max(1.0, high);
    chain_bad[i] = (low <= mid + tol && mid <= high + tol && lib.holds) ? 0.0 : 1.0;
    compare_bad[i] = compare_formulas(profile, m0, l0).holds ? 0.0 : 1.0;

    double v[3];
    for (double& x : v) x = std::exp(std::log(1e-3) + (20.0 - std::log(1e-3)) * rng.uniform());
    const double cutoff = std::exp(3.0);
    const double lhs = lplus(cut(v[0], cutoff)) + lplus(cut(v[1], cutoff)) + lplus(cut(v[2], cutoff));
    const double rhs = cut(std::max({lplus(v[0]), lplus(v[1]), lplus(v[2])}), 3.0);
    const bool ok = (lhs == 0.0 && rhs == 0.0) || (lhs <= 3.0 * rhs * (1 + 1e-12) && rhs <= 3.0 * lhs * (1 + 1e-12));
    maxlog_bad[i] = (ok && max_log_identity_check(v[0], v[1], v[2], cutoff).ratio_ok) ? 0.0 : 1.0;
  });
  const double c = pairwise_sum(chain_bad), m = pairwise_sum(maxlog_bad), f = pairwise_sum(compare_bad);
  d.require(c == 0.0, num(c) + " chain failures in 1e5 profiles");
  d.require(m == 0.0, num(m) + " max/log failures in 1e5 triples");
  d.require(f == 0.0, num(f) + " formula comparison failures");
  return d.outcome();
}

Outcome exponential_separation() {
  Detail d;
  const auto h = ModelSpace::hyperbolic_plane();
  const auto e = ModelSpace::euclidean(2);
  const double m0 = 2.0, r = 15.0;
  std::vector<double> ts, hyp, euc;
  double worst_closed_form = 0.0;
  for (double t = 5.0; t <= 15.0; t += 1.0) {
    const auto sh = separation_fraction(h, h.basepoint(), r, t, m0, 100000, 8000 + static_cast<int>(t),
                                        default_workers());
    const auto se = separation_fraction(e, e.basepoint(), r, t, m0, 100000, 8100 + static_cast<int>(t),
                                        default_workers());
    const double closed = (2.0 / kPi) * std::asin(std::sinh(m0 / 2.0) / std::sinh(t));
    worst_closed_form = std::max(worst_closed_form, std::abs(sh.fraction.mean / closed - 1.0));
    ts.push_back(t);
    hyp.push_back(sh.fraction.mean);
    euc.push_back(se.fraction.mean);
  }
  std::vector<double> log_t, log_h, log_e;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    log_t.push_back(std::log(ts[i]));
    log_h.push_back(std::log(hyp[i]));
    log_e.push_back(std::log(euc[i]));
  }
  const auto h_exp = least_squares(ts, log_h), h_pow = least_squares(log_t, log_h);
  const auto e_exp = least_squares(ts, log_e), e_pow = least_squares(log_t, log_e);
  d.require(h_exp.slope >= kSlopeMin && h_exp.slope <= kSlopeMax, "hyperbolic slope " + num(h_exp.slope));
  d.require(h_exp.rss < h_pow.rss, "hyperbolic: exponential rss " + num(h_exp.rss, 3) + " < power rss " +
                                       num(h_pow.rss, 3));
  d.require(e_pow.rss < e_exp.rss, "euclidean: power rss " + num(e_pow.rss, 3) + " < exponential rss " +
                                       num(e_exp.rss, 3) + " (power slope " + num(e_pow.slope, 4) + ")");
  d.require(worst_closed_form < 1e-6, "orbit fractions match the closed form (rel " + num(worst_closed_form, 2) + ")");
  return d.outcome();
}

// Thick proportion of the fundamental domain |x| <= 1/2, |z| >= 1 cut at
// height 1/eps^2, by 2-D Simpson quadrature of dx dy / y^2 (in u = log y).
double thick_area_oracle(double eps) {
  const double top = 1.0 / (eps * eps);
  auto column = [top](double x) {
    const double bottom = std::sqrt(1.0 - x * x);
    return simpson([](double u) { return std::exp(-u); }, std::log(bottom), std::log(top), 2000);
  };
  auto full = [](double x) { return 1.0 / std::sqrt(1.0 - x * x); };
  return simpson(column, -0.5, 0.5, 400) / simpson(full, -0.5, 0.5, 400);
}

Outcome thick_ergodic() {
  Detail d;
  const auto m = ModelSpace::modular_torus();
  const double eps = 0.5;
  StreamRng rng(9000, 0);
  const double angle = 2.0 * kPi * rng.uniform();
  const double stat = ray_thick_stat(m, m.basepoint(), angle, 1e4, eps, 0.1);
  const double area = thick_area_oracle(eps);
  d.require(std::abs(stat - area) <= kThickTol,
            "ray of length 1e4: thick fraction " + num(stat) + " vs area " + num(area));
  const auto p1 = p1_fraction(m, m.basepoint(), 50.0, 5.0, 0.3, 0.5, 0.2, 2000, 0.1, 9001, default_workers());
  d.require(p1.mean >= kP1Min, "P1 fraction " + num(p1.mean) + " (eps 0.3, theta 0.5, sigma 0.2)");
  return d.outcome();
}

Outcome thin_triangles() {
  Detail d;
  const auto h = ModelSpace::hyperbolic_plane();
  const auto o = h.basepoint();
  const double c = 3.0, ds = default_probe_step(c);
  std::vector<double> hit(1000), dist(1000);
  parallel_for(hit.size(), default_workers(), [&](std::size_t i) {
    StreamRng rng(10000, i);
    for (;;) {
      const auto x = h.polar_sample(o, 12.0, rng), y = h.polar_sample(o, 12.0, rng), z = h.polar_sample(o, 12.0, rng);
      const double dxy = h.distance(x, y);
      if (dxy < 20.0 || h.distance(x, z) < 20.0 || h.distance(y, z) < 20.0) continue;
      const auto p = thin_triangle_probe(h, x, y, z, dxy / 3.0, 2.0 * dxy / 3.0, c, ds);
      hit[i] = p.hit ? 1.0 : 0.0;
      dist[i] = p.min_distance;
      return;
    }
  });
  const double hits = pairwise_sum(hit);
  d.require(hits == 1000.0, "hyperbolic C=3: " + num(hits) + "/1000 hits (max min-distance " +
                                num(*std::max_element(dist.begin(), dist.end()), 3) + ")");
  const auto line = ModelSpace::euclidean(1);
  const auto sup = ModelSpace::sup_product({line, line});
  auto pt = [](double a, double b) { return SpacePoint(std::vector<SpacePoint>{RealVector{a}, RealVector{b}}); };
  std::string growth;
  for (double r : {8.0, 16.0, 32.0, 64.0}) {
    const auto x = pt(0, 0), y = pt(2 * r, r), z = pt(2 * r, -r);
    const double dxy = sup.distance(x, y);
    const auto p = thin_triangle_probe(sup, x, y, z, dxy / 3.0, 2.0 * dxy / 3.0, r / 8.0, default_probe_step(r / 8.0));
    // Exact minimum over I of the sup distance to [x,z] U [y,z] is 4r/9.
    const double exact = 4.0 * r / 9.0;
    if (!(p.min_distance >= r / 4.0) || p.hit || std::abs(p.min_distance - exact) > default_probe_step(r / 8.0))
      d.fail("sup-product r=" + num(r) + ": min distance " + num(p.min_distance));
    growth += (growth.empty() ? "" : ", ") + num(p.min_distance, 4);
  }
  d.add("sup-product min distances " + growth + " (>= r/4, r = 8..64)");
  return d.outcome();
}

Outcome annulus_reduction() {
  Detail d;
  const double r = 20.0;
  for (const auto& [name, space] : {std::pair{std::string("euclidean"), ModelSpace::euclidean(2, 2.0, 1.0)},
                                    std::pair{std::string("hyperbolic"), ModelSpace::hyperbolic_plane()}}) {
    const auto ball = estimate_E(space, space.basepoint(), r, r, 100000, 11000, default_workers());
    const auto annulus = estimate_E(space, space.basepoint(), r, 5.0, 100000, 11001, default_workers());
    const double gap = std::abs(ball.mean - annulus.mean);
    const double bound = kReductionTol + kSigmas * std::hypot(ball.std_error, annulus.std_error);
    d.require(gap <= bound, name + ": |ball - annulus| = " + num(gap, 3) + " <= " + num(bound, 3));
  }
  return d.outcome();
}

Outcome discretizer() {
  Detail d;
  struct Setting {
    ModelSpace space;
    Region region;
  };
  const auto h = ModelSpace::hyperbolic_plane();
  const auto line = ModelSpace::euclidean(1);
  std::vector<Setting> settings = {
      {ModelSpace::euclidean(2), BoxRegion{{-5, -5}, {5, 5}}},
      {ModelSpace::euclidean(2, 1.0), BoxRegion{{-5, -5}, {5, 5}}},
      {h, BallRegion{h.basepoint(), 4.0}},
      {ModelSpace::sup_product({line, line}), BoxRegion{{-5, -5}, {5, 5}}},
  };
  std::vector<Net> nets;
  std::vector<std::size_t> owner;
  for (std::size_t s = 0; s < settings.size(); ++s)
    for (double c : {0.3, 0.45, 0.6}) {
      nets.push_back(build_net(settings[s].space, settings[s].region, c));
      owner.push_back(s);
    }
  std::vector<double> step_bad(1000), near_bad(1000), uncovered(1000);
  parallel_for(step_bad.size(), default_workers(), [&](std::size_t i) {
    StreamRng rng(12000, i);
    const std::size_t j = i % nets.size();
    const auto& space = settings[owner[j]].space;
    const auto& net = nets[j];
    const double tau = 4.0 * net.separation * (1.05 + rng.uniform());
    // Sup-norm radius 4.5 stays inside the boxes; the ball has radius 4.
    const double rad = owner[j] == 2 ? 3.9 : 4.5;
    const auto x = space.polar_sample(space.basepoint(), rad * rng.uniform(), rng);
    const auto y = space.polar_sample(space.basepoint(), rad * rng.uniform(), rng);
    try {
      const auto path = discretize_geodesic(space, net, tau, x, y);
      for (std::size_t k = 0; k + 1 < path.points.size(); ++k)
        if (space.distance(path.points[k], path.points[k + 1]) > tau + 1e-9) step_bad[i] += 1;
      for (std::size_t k = 0; k < path.points.size(); ++k)
        if (space.distance(path.marks[k], path.points[k]) > 2.0 * net.separation + 1e-9) near_bad[i] += 1;
      if (space.distance(path.marks.front(), x) > 1e-9 || space.distance(path.marks.back(), y) > 1e-9)
        step_bad[i] += 1;
    } catch (const std::exception&) {
      uncovered[i] = 1;
    }
  });
  const double s = pairwise_sum(step_bad), n = pairwise_sum(near_bad), u = pairwise_sum(uncovered);
  d.require(s == 0.0 && n == 0.0 && u == 0.0, "1000 segments over " + std::to_string(nets.size()) + " nets: " +
                                                  num(s) + " step-tau, " + num(n) + " 2c-proximity violations, " +
                                                  num(u) + " failures");
  return d.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"E of the euclidean plane is 4/pi", euclidean_plane},
      {"E of the hyperbolic plane increases toward 2", hyperbolic_plane},
      {"tree sphere estimates match enumeration", tree_exactness},
      {"Mahler volumes and bounds", mahler_suite},
      {"density sandwich", density_sandwich},
      {"horoball sandwich and twist bounds", horoball_sandwich_check},
      {"distance-formula chain and max/log identity", formula_arithmetic},
      {"exponential separation on the hyperbolic plane", exponential_separation},
      {"thick-stat ergodic average and P1", thick_ergodic},
      {"thin-triangle dichotomy", thin_triangles},
      {"annulus/ball reduction", annulus_reduction},
      {"discretizer invariants", discretizer},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("%s criterion %2zu: %s [%.2fs] %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
