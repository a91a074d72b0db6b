#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "growthsde/model.hpp"

namespace growthsde {

/// Uniform grid t0 < t0 + dt < ... < t_end with n steps.
struct TimeGrid {
  double t0 = 0.0;
  double t_end = 1.0;
  std::size_t n = 1;

  static TimeGrid make(double t0, double t_end, std::size_t n);
  void validate() const;

  double step() const noexcept { return (t_end - t0) / static_cast<double>(n); }
  double horizon() const noexcept { return t_end - t0; }
  /// Grid point i, computed as one fused multiply-add from t0.
  double time(std::size_t i) const noexcept {
    return std::fma(static_cast<double>(i), step(), t0);
  }
};

/// Full-precision copy of a path in the linearizing coordinate of the model
/// that produced it (ln x for Gompertz, l_infinity - x for Von Bertalanffy).
///
/// Von Bertalanffy paths approach l_infinity exponentially fast; after
/// t ~ 37/kappa the state rounds to l_infinity in double precision while the
/// gap l_infinity - x is still perfectly representable. Estimators read the
/// gap from here when the channel matches their model.
struct LinearChannel {
  ModelKind kind = ModelKind::Gompertz;
  double l_infinity = 1.0;
  std::vector<double> values;

  bool matches(ModelKind k, double l_inf) const noexcept {
    return kind == k && (k != ModelKind::VonBertalanffy || l_infinity == l_inf);
  }
};

struct Path {
  TimeGrid grid;
  std::vector<double> values;
  std::optional<LinearChannel> linear;
  /// Milstein steps that left the state space and were clamped.
  std::size_t clamp_count = 0;
  /// Steps that needed a fallback: column maxima in composite paths,
  /// substitute bridges in imputed paths.
  std::size_t fallback_count = 0;

  std::size_t size() const noexcept { return values.size(); }
  double time(std::size_t i) const noexcept { return grid.time(i); }
};

/// Time-stamped observations of one trajectory.
struct ObservationSet {
  std::vector<double> times;
  std::vector<double> values;
  std::optional<LinearChannel> linear;
  std::optional<ModelKind> source;

  /// Throws ValidationError unless times are finite and strictly increasing,
  /// lengths agree and there are at least two points.
  void validate() const;
  std::size_t size() const noexcept { return values.size(); }
  double horizon() const { return times.back() - times.front(); }
  /// The common spacing; throws ValidationError when some gap differs from
  /// the mean spacing by more than rel_tol relative.
  double uniform_step(double rel_tol = 1e-9) const;
};

/// Points 0, stride, 2 stride, ..., n of the path.
ObservationSet subsample(Path const& path, std::size_t stride);
inline ObservationSet to_observations(Path const& path) {
  return subsample(path, 1);
}

/// Linearizing coordinates of `values`: the channel when it was recorded for
/// the same model, otherwise to_linear applied pointwise.
std::vector<double> linear_coordinates(
    ModelKind kind, double l_infinity, std::span<double const> values,
    std::optional<LinearChannel> const& channel);

}  // namespace growthsde
