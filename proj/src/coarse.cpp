#include "stathyp/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "stathyp/errors.hpp"

namespace stathyp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-12;

// log sinh(u) for u >= 0.
double log_sinh(double u) {
  if (u == 0.0) return kNegInf;
  if (u < 20.0) return std::log(std::sinh(u));
  return u - std::log(2.0) + std::log1p(-std::exp(-2.0 * u));
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Threshold with the cutoff given as a logarithm.
double threshold_log(double value, double log_cutoff) {
  if (value <= 0.0) return log_cutoff == kNegInf ? value : 0.0;
  return std::log(value) >= log_cutoff ? value : 0.0;
}

bool leq(double a, double b) { return a <= b + kRelTol * std::max(std::abs(a), std::abs(b)); }

double log_uniform(StreamRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

}  // namespace

double log_plus(double a) {
  if (!(a >= 0.0)) throw DomainError("log+ is defined for nonnegative arguments");
  return a > 1.0 ? std::log(a) : 0.0;
}

double threshold(double value, double cutoff) { return value >= cutoff ? value : 0.0; }

HoroballPair::HoroballPair(double length_x, double length_y, double twist) {
  if (!(length_x > 0.0) || !(length_y > 0.0) || !std::isfinite(length_x) || !std::isfinite(length_y))
    throw DomainError("curve lengths must be finite and > 0");
  if (!(twist >= 0.0) || !std::isfinite(twist)) throw DomainError("twisting distance must be finite and >= 0");
  lx_ = -std::log(length_x);
  ly_ = -std::log(length_y);
  lt_ = twist > 0.0 ? std::log(twist) : kNegInf;
}

HoroballPair HoroballPair::from_logs(double log_inv_length_x, double log_inv_length_y, double log_twist) {
  if (!std::isfinite(log_inv_length_x) || !std::isfinite(log_inv_length_y))
    throw DomainError("curve lengths must be finite and > 0");
  if (std::isnan(log_twist) || log_twist == std::numeric_limits<double>::infinity())
    throw DomainError("twisting distance must be finite");
  HoroballPair h;
  h.lx_ = log_inv_length_x;
  h.ly_ = log_inv_length_y;
  h.lt_ = log_twist;
  return h;
}

double HoroballPair::length_x() const { return std::exp(-lx_); }
double HoroballPair::length_y() const { return std::exp(-ly_); }
double HoroballPair::twist() const { return std::exp(lt_); }

bool HoroballPair::short_in_both(double eps0) const {
  if (!(eps0 > 0.0)) throw ParameterError("eps0 must be > 0");
  return short_in_both_log(-std::log(eps0));
}

double annular_distance(const HoroballPair& h) {
  // Points (0, e^A) and (d, e^B): sinh(dist/2)^2 = sinh((A-B)/2)^2 + (d / (2 e^{(A+B)/2}))^2.
  const double a = h.height_x(), b = h.height_y();
  const double log_s2 = log_add(2.0 * log_sinh(0.5 * std::abs(a - b)),
                                h.log_twist() == kNegInf ? kNegInf
                                                         : 2.0 * (h.log_twist() - 0.5 * (a + b) - std::log(2.0)));
  if (log_s2 == kNegInf) return 0.0;
  const double log_s = 0.5 * log_s2;
  if (log_s < 20.0) return 2.0 * std::asinh(std::exp(log_s));
  // asinh(S) = log(2S) + log1p(1/(4 S^2)) up to O(S^-4).
  return 2.0 * (log_s + std::log(2.0) + 0.25 * std::exp(-2.0 * log_s));
}

double h_combined(const HoroballPair& h) {
  return std::max({std::max(0.0, h.log_twist()), h.height_x(), h.height_y()});
}

double horocycle_distance(double twist) {
  if (!(twist >= 0.0)) throw DomainError("twisting distance must be >= 0");
  return 2.0 * std::asinh(0.5 * twist);
}

void validate(const ProjectionProfile& profile) {
  if (!(profile.top_level >= 0.0) || !std::isfinite(profile.top_level))
    throw ParameterError("top-level projection must be finite and >= 0");
  std::set<std::string> labels;
  for (const auto& e : profile.entries) {
    if (!labels.insert(e.label).second) throw ParameterError("duplicate profile label '" + e.label + "'");
    if (e.kind == ProfileEntry::Kind::non_annular && (!(e.value >= 0.0) || !std::isfinite(e.value)))
      throw ParameterError("projection value for '" + e.label + "' must be finite and >= 0");
  }
}

double threshold_floor(double eps0) {
  if (!(eps0 > 0.0)) throw ParameterError("eps0 must be > 0");
  return 36.0 * log_plus(1.0 / eps0);
}

double repackaged_distance(const ProjectionProfile& profile, double cutoff) {
  if (!(cutoff > 0.0)) throw ParameterError("threshold M0 must be > 0");
  return repackaged_distance_log(profile, std::log(cutoff));
}

double repackaged_distance_log(const ProjectionProfile& profile, double log_cutoff) {
  double sum = profile.top_level;
  for (const auto& e : profile.entries) {
    const double d = e.kind == ProfileEntry::Kind::annular ? annular_distance(e.annulus) : e.value;
    sum += threshold_log(d, log_cutoff);
  }
  return sum;
}

double reorganized_distance(const ProjectionProfile& profile, double cutoff, double eps0) {
  if (!(cutoff > 0.0)) throw ParameterError("threshold M0 must be > 0");
  if (!(eps0 > 0.0)) throw ParameterError("eps0 must be > 0");
  return reorganized_distance_log(profile, std::log(cutoff), -std::log(eps0));
}

double reorganized_distance_log(const ProjectionProfile& profile, double log_cutoff, double log_inv_eps0) {
  double sum = profile.top_level;
  for (const auto& e : profile.entries) {
    if (e.kind == ProfileEntry::Kind::non_annular) {
      sum += threshold_log(e.value, log_cutoff);
    } else if (e.annulus.short_in_both_log(log_inv_eps0)) {
      sum += threshold_log(annular_distance(e.annulus), log_cutoff);
    } else {
      sum += threshold(h_combined(e.annulus), log_cutoff);
    }
  }
  return sum;
}

MaxLogCheck max_log_identity_check(double f, double g, double h, double cutoff) {
  if (!(cutoff > 1.0)) throw ParameterError("max/log identity needs M0 > 1");
  MaxLogCheck c;
  c.lhs = log_plus(threshold(f, cutoff)) + log_plus(threshold(g, cutoff)) + log_plus(threshold(h, cutoff));
  c.rhs = threshold(std::max({log_plus(f), log_plus(g), log_plus(h)}), std::log(cutoff));
  if (c.lhs > 0.0 || c.rhs > 0.0) c.ratio_ok = leq(c.lhs, 3.0 * c.rhs) && leq(c.rhs, 3.0 * c.lhs);
  return c;
}

SandwichCheck horoball_sandwich(const HoroballPair& h, double log_inv_eps0) {
  SandwichCheck c;
  c.d_a = annular_distance(h);
  c.h_a = h_combined(h);
  const double floor = 36.0 * std::max(0.0, log_inv_eps0);
  c.applicable = !h.short_in_both_log(log_inv_eps0) && std::max(c.d_a, c.h_a) >= floor;
  if (c.applicable) c.holds = leq(c.d_a / 6.0, c.h_a) && leq(c.h_a, 6.0 * c.d_a);
  return c;
}

TwistCheck twist_inequalities(double twist) {
  TwistCheck c;
  const double b = horocycle_distance(twist);
  c.applicable = b >= 3.0 || twist >= 3.0;
  if (c.applicable) c.holds = leq(log_plus(twist), b) && leq(b, 4.0 * log_plus(twist));
  return c;
}

ChainCheck horoball_chain(const ProjectionProfile& profile, double cutoff, double log_inv_eps0) {
  ChainCheck c;
  for (const auto& e : profile.entries) {
    if (e.kind != ProfileEntry::Kind::annular || e.annulus.short_in_both_log(log_inv_eps0)) continue;
    const double da = annular_distance(e.annulus);
    c.low += threshold(da, 6.0 * cutoff) / 6.0;
    c.mid += threshold(h_combined(e.annulus), cutoff);
    c.high += 6.0 * threshold(da, cutoff / 6.0);
  }
  c.holds = leq(c.low, c.mid) && leq(c.mid, c.high);
  return c;
}

FormulaComparison compare_formulas(const ProjectionProfile& profile, double cutoff, double log_inv_eps0) {
  FormulaComparison c;
  c.upper_lhs = reorganized_distance_log(profile, 6.0 * cutoff, log_inv_eps0);
  c.upper_rhs = 6.0 * repackaged_distance_log(profile, std::log(cutoff));
  c.lower_lhs = repackaged_distance_log(profile, cutoff);
  c.lower_rhs = 6.0 * reorganized_distance_log(profile, cutoff, log_inv_eps0);
  c.holds = leq(c.upper_lhs, c.upper_rhs) && leq(c.lower_lhs, c.lower_rhs);
  return c;
}

HoroballPair random_horoball_pair(StreamRng& rng, double length_scale, double twist_scale) {
  const double lx = log_uniform(rng, -20.0, length_scale);
  const double ly = log_uniform(rng, -20.0, length_scale);
  const double lt = log_uniform(rng, std::log(1e-3), twist_scale);
  return HoroballPair::from_logs(lx, ly, lt);
}

ProjectionProfile random_profile(StreamRng& rng, double length_scale) {
  ProjectionProfile p;
  const double lo = std::log(1e-3), hi = 20.0;
  p.top_level = std::exp(log_uniform(rng, lo, hi));
  const auto count = static_cast<std::size_t>(rng.uniform() * 51.0);
  for (std::size_t i = 0; i < count; ++i) {
    ProfileEntry e;
    e.label = "Y" + std::to_string(i);
    if (rng.uniform() < 0.5) {
      e.kind = ProfileEntry::Kind::non_annular;
      e.value = std::exp(log_uniform(rng, lo, hi));
    } else {
      e.kind = ProfileEntry::Kind::annular;
      e.annulus = random_horoball_pair(rng, length_scale, hi);
    }
    p.entries.push_back(std::move(e));
  }
  return p;
}

}  // namespace stathyp
