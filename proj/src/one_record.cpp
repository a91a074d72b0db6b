#include "growthsde/one_record.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cctype>
#include <cmath>
#include <string>

#include "growthsde/errors.hpp"

namespace growthsde {

void CrossSection::validate() const {
  if (times.size() < 2) throw ValidationError("cross-section: need >= 2 time points");
  if (columns.size() != times.size()) {
    throw ValidationError("cross-section: one column per time point required");
  }
  ObservationSet probe;
  probe.times = times;
  probe.values.assign(times.size(), 0.0);
  probe.validate();
  probe.uniform_step();
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k].size() < 2) {
      throw ValidationError("cross-section: column " + std::to_string(k) +
                            " has fewer than 2 individuals");
    }
    for (double v : columns[k]) {
      if (!std::isfinite(v)) {
        throw ValidationError("cross-section: non-finite value in column " +
                              std::to_string(k));
      }
    }
  }
}

CrossSection CrossSection::from_paths(std::vector<Path> const& paths,
                                      std::size_t stride) {
  if (paths.empty()) throw ValidationError("cross-section: no paths");
  CrossSection cs;
  auto const first = subsample(paths.front(), stride);
  cs.times = first.times;
  cs.columns.assign(cs.times.size(), {});
  for (auto& col : cs.columns) col.reserve(paths.size());
  for (auto const& path : paths) {
    if (path.grid.n != paths.front().grid.n ||
        path.grid.t0 != paths.front().grid.t0 ||
        path.grid.t_end != paths.front().grid.t_end) {
      throw ValidationError("cross-section: paths on different grids");
    }
    for (std::size_t k = 0; k < cs.times.size(); ++k) {
      cs.columns[k].push_back(path.values[k * stride]);
    }
  }
  return cs;
}

double sample_trunc_normal(TruncNormalParams const& p, RngStream& stream) {
  if (!(p.variance > 0.0) || !std::isfinite(p.variance)) {
    throw ValidationError("truncated normal: variance must be > 0");
  }
  double const sd = std::sqrt(p.variance);
  boost::math::normal_distribution<double> const std_normal(0.0, 1.0);
  double const alpha = (p.lower - p.mean) / sd;
  // Mass above the truncation point, computed from the upper tail so that
  // deep truncation keeps its relative precision.
  double const kept =
      boost::math::cdf(boost::math::complement(std_normal, alpha));
  if (kept < 1e-15) {
    throw NumericalError("truncated normal: retained mass below 1e-15");
  }
  double const u = stream.uniform();
  double const z =
      boost::math::quantile(boost::math::complement(std_normal, u * kept));
  double x = p.mean + sd * z;
  // Rounding can land exactly on the bound when it sits in the far tail.
  if (!(x > p.lower)) x = std::nextafter(p.lower, INFINITY);
  return x;
}

std::string_view to_string(EmptySetPolicy policy) {
  switch (policy) {
    case EmptySetPolicy::ResampleThenMax:
      return "resample-then-max";
    case EmptySetPolicy::ResampleUntilHit:
      return "resample-until-hit";
  }
  return "unknown";
}

EmptySetPolicy parse_empty_set_policy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "resample-then-max") return EmptySetPolicy::ResampleThenMax;
  if (lower == "resample-until-hit") return EmptySetPolicy::ResampleUntilHit;
  throw ValidationError("unknown empty-set policy '" + std::string(name) + "'");
}

Path build_composite_path(CrossSection const& cs, RngStream& stream,
                          CompositeOptions const& opts) {
  cs.validate();
  std::size_t const n = cs.size() - 1;
  Path path;
  path.grid = TimeGrid{cs.times.front(), cs.times.back(), n};
  path.values.resize(n + 1);

  auto const& col0 = cs.columns.front();
  double x = col0[stream.index(col0.size())];
  path.values[0] = x;

  std::vector<double> sorted;
  for (std::size_t k = 1; k <= n; ++k) {
    sorted = cs.columns[k];
    std::sort(sorted.begin(), sorted.end());
    auto const m = static_cast<double>(sorted.size());
    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= m;
    double var = 0.0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    var /= m - 1.0;

    // Smallest member >= threshold, if any.
    auto pick = [&](double threshold) -> double const* {
      auto it = std::lower_bound(sorted.begin(), sorted.end(), threshold);
      return it == sorted.end() ? nullptr : &*it;
    };
    auto draw = [&] {
      if (var == 0.0) return x;
      return sample_trunc_normal({x - var, x, var}, stream);
    };

    double const* hit = pick(draw());
    std::size_t redraws = 0;
    while (hit == nullptr) {
      bool const capped = opts.policy == EmptySetPolicy::ResampleThenMax
                              ? redraws >= opts.resample_limit
                              : redraws >= opts.hit_cap;
      if (capped) break;
      hit = pick(draw());
      ++redraws;
    }
    if (hit == nullptr) {
      if (opts.policy == EmptySetPolicy::ResampleUntilHit) {
        throw NumericalError("composite path: no individual reaches the "
                             "threshold at time index " + std::to_string(k));
      }
      x = sorted.back();
      ++path.fallback_count;
    } else {
      x = *hit;
    }
    path.values[k] = x;
  }
  return path;
}

Path one_record_study(ModelSpec const& spec, std::size_t m,
                      TimeGrid const& grid, double beta_a, double beta_b,
                      std::size_t stride, RngStream const& stream,
                      Simulator sim, CompositeOptions const& opts) {
  if (m < 2) throw ValidationError("one-record: need at least 2 individuals");
  spec.validate();
  grid.validate();
  std::vector<Path> paths;
  paths.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    RngStream sub = stream.child(i);
    double const x0 = sample_beta_init(beta_a, beta_b, sub);
    paths.push_back(simulate(sim, spec, x0, grid, sub));
  }
  auto const cs = CrossSection::from_paths(paths, stride);
  RngStream composite = stream.child(m);
  return build_composite_path(cs, composite, opts);
}

}  // namespace growthsde
