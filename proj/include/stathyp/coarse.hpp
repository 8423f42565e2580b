#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stathyp/rng.hpp"

namespace stathyp {

/// max(0, log a); throws DomainError for a < 0.
double log_plus(double a);

/// N when N >= M0, otherwise 0.
double threshold(double value, double cutoff);

/// Annular data for one curve: lengths of the core curve at x and y and the
/// twisting distance d_C. Stored on a log scale so lengths far below the
/// double range (e^-5000) remain representable.
class HoroballPair {
 public:
  /// From plain values; lengths must be > 0, twist >= 0.
  HoroballPair(double length_x, double length_y, double twist);
  /// From logs: log(1/l_x), log(1/l_y), log d_C (-inf for d_C = 0).
  static HoroballPair from_logs(double log_inv_length_x, double log_inv_length_y, double log_twist);

  double log_inv_length_x() const { return lx_; }
  double log_inv_length_y() const { return ly_; }
  double log_twist() const { return lt_; }
  double length_x() const;
  double length_y() const;
  double twist() const;

  /// Heights log max(1, 1/l) of the two horoball projections above the horocycle at height 1.
  double height_x() const { return lx_ > 0.0 ? lx_ : 0.0; }
  double height_y() const { return ly_ > 0.0 ? ly_ : 0.0; }

  /// The curve is eps0-short at both endpoints (the Gamma_xy classification).
  bool short_in_both(double eps0) const;
  /// Same test with eps0 given as log(1/eps0).
  bool short_in_both_log(double log_inv_eps0) const { return lx_ > log_inv_eps0 && ly_ > log_inv_eps0; }

 private:
  HoroballPair() = default;
  double lx_ = 0.0, ly_ = 0.0, lt_ = 0.0;
};

/// Hyperbolic distance between (0, max(1, 1/l_x)) and (d_C, max(1, 1/l_y)).
double annular_distance(const HoroballPair& h);

/// max(log+ d_C, log+ 1/l_x, log+ 1/l_y).
double h_combined(const HoroballPair& h);

/// arccosh(1 + d^2 / 2): hyperbolic distance between (0,1) and (d,1).
double horocycle_distance(double twist);

struct ProfileEntry {
  enum class Kind { non_annular, annular };
  std::string label;
  Kind kind = Kind::non_annular;
  double value = 0.0;               // d_V for non-annular entries
  HoroballPair annulus{1.0, 1.0, 0.0};  // used for annular entries
};

struct ProjectionProfile {
  double top_level = 0.0;  // d_S
  std::vector<ProfileEntry> entries;
};

/// Throws ParameterError on negative/non-finite values or duplicate labels.
void validate(const ProjectionProfile& profile);

/// Default floor 36 log+(1/eps0) for distance-formula thresholds.
double threshold_floor(double eps0);

/// d_S + sum over entries of threshold(d, M0), annular d = annular_distance.
/// Below the floor the value is still computed; callers decide whether to report it.
double repackaged_distance(const ProjectionProfile& profile, double cutoff);
/// Same, with the cutoff passed as log M0 (so M0 = e^{6000} is expressible).
double repackaged_distance_log(const ProjectionProfile& profile, double log_cutoff);

/// d_S + sum_V [d_V]_{M0} + sum_{short in both} [d_A]_{M0}
///     + sum_{others} [H_A]_{log M0}.
double reorganized_distance(const ProjectionProfile& profile, double cutoff, double eps0);
double reorganized_distance_log(const ProjectionProfile& profile, double log_cutoff, double log_inv_eps0);

struct MaxLogCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ratio_ok = true;
};

/// lhs = sum of log+[f]_{M0}; rhs = [max log+ f]_{log M0}; ok iff each is
/// at most three times the other (whenever either is positive).
MaxLogCheck max_log_identity_check(double f, double g, double h, double cutoff);

/// Outcome of the horoball sandwich 6^-1 d_A <= H_A <= 6 d_A for one pair.
struct SandwichCheck {
  bool applicable = false;  // hypotheses hold
  bool holds = true;
  double d_a = 0.0;
  double h_a = 0.0;
};

/// Checks the sandwich when the curve is not short in both and
/// max(d_A, H_A) >= 36 log+(1/eps0).
SandwichCheck horoball_sandwich(const HoroballPair& h, double log_inv_eps0);

/// log+ d <= B <= 4 log+ d for B = arccosh(1 + d^2/2); applicable when B >= 3 or d >= 3.
struct TwistCheck {
  bool applicable = false;
  bool holds = true;
};
TwistCheck twist_inequalities(double twist);

/// Termwise chain over entries not short in both:
///   sum 6^-1 [d_A]_{6 M0} <= sum [H_A]_{M0} <= sum 6 [d_A]_{M0/6}.
struct ChainCheck {
  double low = 0.0, mid = 0.0, high = 0.0;
  bool holds = true;
};
ChainCheck horoball_chain(const ProjectionProfile& profile, double cutoff, double log_inv_eps0);

/// Two-sided comparison of the reorganized and repackaged formulas that follows
/// from the chain: reorganized(e^{6 M}) <= 6 repackaged(M) and
/// repackaged(e^M) <= 6 reorganized(e^M), for M >= 36 log+(1/eps0).
struct FormulaComparison {
  double upper_lhs = 0.0, upper_rhs = 0.0;
  double lower_lhs = 0.0, lower_rhs = 0.0;
  bool holds = true;
};
FormulaComparison compare_formulas(const ProjectionProfile& profile, double cutoff, double log_inv_eps0);

/// Random profile: 0..50 entries, values log-uniform over [1e-3, e^20];
/// annular log-inverse lengths uniform over [-20, length_scale].
ProjectionProfile random_profile(StreamRng& rng, double length_scale = 20.0);

/// Random horoball pair with log(1/l) in [-20, length_scale] and log d_C in
/// [log 1e-3, twist_scale].
HoroballPair random_horoball_pair(StreamRng& rng, double length_scale, double twist_scale);

}  // namespace stathyp
