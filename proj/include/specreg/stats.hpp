#pragma once

#include <cstdint>
#include <vector>

namespace specreg::stats {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for k successes in n trials.
Interval wilson(std::int64_t k, std::int64_t n, double z = kZ95);

struct LogLogPoint {
  double x = 0.0;
  double p = 0.0;
  /// Relative weight of the point; 1 for an ordinary least-squares fit.
  double weight = 1.0;
};

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares fit of log p against log x (weighted when weights differ).
/// Requires at least four points with positive x and p; InvalidInput otherwise.
SlopeFit fit_loglog_slope(const std::vector<LogLogPoint>& points);

/// Points for a tail-probability fit: one per grid value with a nonzero
/// count, weighted by the inverse binomial variance of log p_hat,
/// k / (1 - p_hat).
std::vector<LogLogPoint> tail_points(const std::vector<double>& x,
                                     const std::vector<std::int64_t>& counts,
                                     std::int64_t trials);

/// Empirical quantile with linear interpolation between order statistics
/// (type 7). `values` need not be sorted.
double quantile(std::vector<double> values, double q);

struct MeanEstimate {
  double mean = 0.0;
  double stddev = 0.0;
  Interval ci95;
  std::int64_t count = 0;
};

MeanEstimate mean_estimate(const std::vector<double>& values);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf cdf);

/// Asymptotic 1% critical value of the KS statistic for n samples.
double ks_critical_1pct(std::int64_t n);

}  // namespace specreg::stats

#include <algorithm>
#include <cmath>

template <class Cdf>
double specreg::stats::ks_statistic(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}
