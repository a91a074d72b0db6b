#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "growthsde/model.hpp"
#include "growthsde/path.hpp"
#include "growthsde/rng.hpp"
#include "growthsde/simulate.hpp"

namespace growthsde {

/// Values of the individuals measured at each time point. Columns may be
/// ragged (real data) or all of size M (simulation studies).
struct CrossSection {
  std::vector<double> times;
  std::vector<std::vector<double>> columns;

  /// Throws ValidationError unless times are strictly increasing and uniform,
  /// every column has at least two finite values, and sizes agree.
  void validate() const;
  std::size_t size() const noexcept { return times.size(); }

  /// Column k holds path i's value at point k * stride, for every path.
  static CrossSection from_paths(std::vector<Path> const& paths,
                                 std::size_t stride = 1);
};

struct TruncNormalParams {
  double lower = 0.0;
  double mean = 0.0;
  double variance = 1.0;
};

/// Normal(mean, variance) conditioned on (lower, inf), by inverting the
/// normal CDF on the retained tail. Throws NumericalError when the retained
/// mass is below 1e-15.
double sample_trunc_normal(TruncNormalParams const& p, RngStream& stream);

/// What to do when no individual at time k reaches the threshold draw.
enum class EmptySetPolicy {
  /// Redraw the threshold up to `resample_limit` times, then take the column
  /// maximum and count a fallback.
  ResampleThenMax,
  /// Redraw until some individual qualifies; NumericalError after `hit_cap`.
  ResampleUntilHit,
};

std::string_view to_string(EmptySetPolicy policy);
EmptySetPolicy parse_empty_set_policy(std::string_view name);

struct CompositeOptions {
  EmptySetPolicy policy = EmptySetPolicy::ResampleThenMax;
  std::size_t resample_limit = 100;
  std::size_t hit_cap = 1'000'000;
};

/// One trajectory threaded through the cross-section: start at a uniformly
/// chosen member of column 0, then at each time draw a threshold
/// Y ~ TN(X_prev - v, X_prev, v) with v the column variance (M - 1
/// denominator) and move to the smallest member of the column that is >= Y.
Path build_composite_path(CrossSection const& cs, RngStream& stream,
                          CompositeOptions const& opts = {});

/// Simulates m individuals from Beta(beta_a, beta_b) initial sizes (individual
/// i uses stream.child(i)), keeps every `stride`-th grid point and builds the
/// composite path from stream.child(m).
Path one_record_study(ModelSpec const& spec, std::size_t m,
                      TimeGrid const& grid, double beta_a, double beta_b,
                      std::size_t stride, RngStream const& stream,
                      Simulator sim = Simulator::Milstein,
                      CompositeOptions const& opts = {});

}  // namespace growthsde
