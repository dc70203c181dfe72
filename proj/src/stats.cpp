#include "specreg/stats.hpp"

#include <algorithm>
#include <cmath>

#include "specreg/error.hpp"

namespace specreg::stats {

Interval wilson(std::int64_t k, std::int64_t n, double z) {
  if (n <= 0 || k < 0 || k > n) throw InvalidInput("wilson: need 0 <= k <= n, n > 0");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SlopeFit fit_loglog_slope(const std::vector<LogLogPoint>& points) {
  if (points.size() < 4) throw InvalidInput("fit_loglog_slope: need at least 4 points");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (const auto& pt : points) {
    if (!(pt.x > 0.0) || !(pt.p > 0.0) || !(pt.weight > 0.0)) {
      throw InvalidInput("fit_loglog_slope: x, p and weights must be positive");
    }
    sw += pt.weight;
    sx += pt.weight * std::log(pt.x);
    sy += pt.weight * std::log(pt.p);
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& pt : points) {
    const double dx = std::log(pt.x) - mx;
    sxx += pt.weight * dx * dx;
    sxy += pt.weight * dx * (std::log(pt.p) - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("fit_loglog_slope: x values must not all coincide");

  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = static_cast<int>(points.size());
  double rss = 0.0;
  for (const auto& pt : points) {
    const double r = std::log(pt.p) - (fit.intercept + fit.slope * std::log(pt.x));
    rss += pt.weight * r * r;
  }
  const double dof = static_cast<double>(points.size()) - 2.0;
  fit.stderr_ = std::sqrt(rss / dof / sxx);
  return fit;
}

std::vector<LogLogPoint> tail_points(const std::vector<double>& x,
                                     const std::vector<std::int64_t>& counts,
                                     std::int64_t trials) {
  std::vector<LogLogPoint> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (counts[i] <= 0) continue;
    const double p = static_cast<double>(counts[i]) / static_cast<double>(trials);
    // Saturated points carry no rate information.
    if (p >= 1.0) continue;
    out.push_back({x[i], p, static_cast<double>(counts[i]) / (1.0 - p)});
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidInput("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("quantile: q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

MeanEstimate mean_estimate(const std::vector<double>& values) {
  MeanEstimate m;
  m.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  const double half = kZ95 * m.stddev / std::sqrt(static_cast<double>(values.size()));
  m.ci95 = {m.mean - half, m.mean + half};
  return m;
}

double ks_critical_1pct(std::int64_t n) {
  // c(alpha) = sqrt(-ln(alpha/2)/2) = 1.6276 for alpha = 0.01.
  return std::sqrt(-std::log(0.005) / 2.0) / std::sqrt(static_cast<double>(n));
}

}  // namespace specreg::stats
