#pragma once

#include <span>
#include <utility>

namespace growthsde {

double mean(std::span<double const> xs);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<double const> xs);

/// Empirical p-quantile with linear interpolation between order statistics,
/// h = (n - 1) p + 1 (Hyndman-Fan type 7).
double quantile(std::span<double const> xs, double p);

/// Central interval with the given coverage in (0, 1): the type-7 quantiles
/// at (1 - coverage)/2 and (1 + coverage)/2. Needs at least two samples.
std::pair<double, double> quantiles(std::span<double const> xs, double coverage);

}  // namespace growthsde
