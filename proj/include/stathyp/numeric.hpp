#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace stathyp {

/// Pairwise (cascade) summation with a fixed split order, so the result
/// depends only on the values and never on how they were produced.
double pairwise_sum(std::span<const double> values);

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error of the mean (n - 1 denominator).
MeanAndError mean_and_error(std::span<const double> values);

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
/// handled exactly once; bodies must only write to index-owned storage.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

/// Least-squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_ss = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Worker count used when the caller passes 0.
int default_workers();

}  // namespace stathyp
