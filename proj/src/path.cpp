#include "growthsde/path.hpp"

#include <string>

#include "growthsde/errors.hpp"

namespace growthsde {

TimeGrid TimeGrid::make(double t0, double t_end, std::size_t n) {
  TimeGrid grid{t0, t_end, n};
  grid.validate();
  return grid;
}

void TimeGrid::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t_end > t0)) {
    throw ValidationError("time grid: need finite t_end > t0");
  }
  if (n < 1) throw ValidationError("time grid: need at least one step");
}

void ObservationSet::validate() const {
  if (times.size() != values.size()) {
    throw ValidationError("observations: times and values differ in length");
  }
  if (values.size() < 2) {
    throw ValidationError("observations: need at least two points");
  }
  if (linear && linear->values.size() != values.size()) {
    throw ValidationError("observations: linear channel length mismatch");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw ValidationError("observations: non-finite entry at index " +
                            std::to_string(i));
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw ValidationError("observations: times not strictly increasing at "
                            "index " + std::to_string(i));
    }
  }
}

double ObservationSet::uniform_step(double rel_tol) const {
  validate();
  auto const n = static_cast<double>(times.size() - 1);
  double const dt = (times.back() - times.front()) / n;
  for (std::size_t i = 1; i < times.size(); ++i) {
    double const gap = times[i] - times[i - 1];
    if (std::abs(gap - dt) > rel_tol * dt) {
      throw ValidationError("observations: non-uniform spacing at index " +
                            std::to_string(i));
    }
  }
  return dt;
}

ObservationSet subsample(Path const& path, std::size_t stride) {
  std::size_t const n = path.grid.n;
  if (path.values.size() != n + 1) {
    throw ValidationError("subsample: path length does not match its grid");
  }
  if (stride == 0 || n % stride != 0) {
    throw ValidationError("subsample: stride " + std::to_string(stride) +
                          " does not divide n = " + std::to_string(n));
  }
  ObservationSet obs;
  std::size_t const m = n / stride + 1;
  obs.times.reserve(m);
  obs.values.reserve(m);
  if (path.linear) {
    obs.linear = LinearChannel{path.linear->kind, path.linear->l_infinity, {}};
    obs.linear->values.reserve(m);
    obs.source = path.linear->kind;
  }
  for (std::size_t i = 0; i <= n; i += stride) {
    obs.times.push_back(path.grid.time(i));
    obs.values.push_back(path.values[i]);
    if (obs.linear) obs.linear->values.push_back(path.linear->values[i]);
  }
  return obs;
}

std::vector<double> linear_coordinates(
    ModelKind kind, double l_infinity, std::span<double const> values,
    std::optional<LinearChannel> const& channel) {
  if (channel && channel->matches(kind, l_infinity)) {
    if (channel->values.size() != values.size()) {
      throw ValidationError("linear channel length mismatch");
    }
    return channel->values;
  }
  ModelSpec const spec{kind, 1.0, 1.0, l_infinity};
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) out.push_back(to_linear(spec, x));
  return out;
}

}  // namespace growthsde
