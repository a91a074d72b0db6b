#include "growthsde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "growthsde/errors.hpp"

namespace growthsde {

double mean(std::span<double const> xs) {
  if (xs.empty()) throw ValidationError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<double const> xs) {
  if (xs.size() < 2) throw ValidationError("stddev needs at least two samples");
  double const m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::span<double const> xs, double p) {
  if (xs.empty()) throw ValidationError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("quantile level outside [0, 1]");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  double const h = static_cast<double>(sorted.size() - 1) * p;
  auto const lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  double const frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::pair<double, double> quantiles(std::span<double const> xs, double coverage) {
  if (xs.size() < 2) throw ValidationError("quantiles need at least two samples");
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw ValidationError("coverage must lie in the open interval (0, 1)");
  }
  double const tail = (1.0 - coverage) / 2.0;
  return {quantile(xs, tail), quantile(xs, 1.0 - tail)};
}

}  // namespace growthsde
