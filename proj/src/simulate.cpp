#include "growthsde/simulate.hpp"

#include <cmath>
#include <string>

#include "growthsde/errors.hpp"

namespace growthsde {
namespace {

void check_start(ModelSpec const& spec, double x0) {
  spec.validate();
  if (!in_interior(spec, x0)) {
    throw DomainError("initial state " + std::to_string(x0) +
                      " is outside the " + std::string(to_string(spec.kind)) +
                      " state space");
  }
}

// Milstein in a coordinate where the state space is (0, inf): x itself for
// Gompertz and Logistic, the gap g = l_infinity - L for Von Bertalanffy.
// Returns the new value and whether it was clamped.
struct Advance {
  double value;
  bool clamped;
};

Advance advance_positive(ModelSpec const& spec, double w, double dt,
                         double dw) {
  double const s = spec.sigma;
  double const corr = 0.5 * s * s * w * (dw * dw - dt);
  double next = 0.0;
  switch (spec.kind) {
    case ModelKind::Gompertz:
      next = w - spec.drift * w * std::log(w) * dt + s * w * dw + corr;
      break;
    case ModelKind::Logistic:
      next = w + spec.drift * w * (1.0 - w) * dt + s * w * dw + corr;
      break;
    case ModelKind::VonBertalanffy:
      // dg = -kappa g dt - sigma g dW
      next = w - spec.drift * w * dt - s * w * dw + corr;
      break;
  }
  if (!std::isfinite(next)) {
    throw NumericalError("milstein: state diverged; the grid is too coarse");
  }
  if (next <= 0.0) return {kClampEpsilon, true};
  return {next, false};
}

}  // namespace

std::string_view to_string(Simulator sim) {
  switch (sim) {
    case Simulator::Milstein:
      return "milstein";
    case Simulator::Exact:
      return "exact";
    case Simulator::Solution:
      return "solution";
  }
  return "unknown";
}

Simulator parse_simulator(std::string_view name) {
  if (name == "milstein") return Simulator::Milstein;
  if (name == "exact") return Simulator::Exact;
  if (name == "solution") return Simulator::Solution;
  throw ValidationError("unknown simulator '" + std::string(name) +
                        "' (expected milstein|exact|solution)");
}

Simulator default_simulator(ModelKind kind) {
  return kind == ModelKind::Logistic ? Simulator::Milstein : Simulator::Exact;
}

double milstein_step(ModelSpec const& spec, double x, double dt, double dw) {
  double const b = diffusion(spec, x);
  return x + drift(spec, x) * dt + b * dw +
         0.5 * b * diffusion_deriv(spec, x) * (dw * dw - dt);
}

Path milstein_simulate(ModelSpec const& spec, double x0, TimeGrid const& grid,
                       RngStream& stream) {
  check_start(spec, x0);
  grid.validate();
  double const dt = grid.step();
  double const sqrt_dt = std::sqrt(dt);
  bool const gap = spec.kind == ModelKind::VonBertalanffy;

  Path path;
  path.grid = grid;
  path.values.resize(grid.n + 1);
  std::vector<double> work(grid.n + 1);
  work[0] = gap ? spec.l_infinity - x0 : x0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    auto const step = advance_positive(spec, work[i], dt, sqrt_dt * stream.normal());
    work[i + 1] = step.value;
    path.clamp_count += step.clamped ? 1 : 0;
  }
  if (static_cast<double>(path.clamp_count) >
      kMaxClampRate * static_cast<double>(grid.n)) {
    throw NumericalError("milstein: " + std::to_string(path.clamp_count) +
                         " of " + std::to_string(grid.n) +
                         " steps clamped; refine the grid");
  }
  if (gap) {
    for (std::size_t i = 0; i <= grid.n; ++i) {
      path.values[i] = spec.l_infinity - work[i];
    }
    path.values[0] = x0;
    path.linear = LinearChannel{spec.kind, spec.l_infinity, std::move(work)};
  } else {
    path.values = std::move(work);
  }
  return path;
}

Path exact_simulate(ModelSpec const& spec, double x0, TimeGrid const& grid,
                    RngStream& stream) {
  check_start(spec, x0);
  grid.validate();
  double const dt = grid.step();
  double const s2 = spec.sigma * spec.sigma;

  Path path;
  path.grid = grid;
  path.values.resize(grid.n + 1);
  std::vector<double> lin(grid.n + 1);

  switch (spec.kind) {
    case ModelKind::Gompertz: {
      double const b = spec.drift;
      double const decay = std::exp(-b * dt);
      double const shift = -s2 / (2.0 * b) * -std::expm1(-b * dt);
      double const sd = std::sqrt(s2 * -std::expm1(-2.0 * b * dt) / (2.0 * b));
      lin[0] = std::log(x0);
      path.values[0] = x0;
      for (std::size_t i = 0; i < grid.n; ++i) {
        lin[i + 1] = lin[i] * decay + shift + sd * stream.normal();
        path.values[i + 1] = std::exp(lin[i + 1]);
      }
      break;
    }
    case ModelKind::VonBertalanffy: {
      double const mean = (-spec.drift - 0.5 * s2) * dt;
      double const sd = spec.sigma * std::sqrt(dt);
      double log_gap = std::log(spec.l_infinity - x0);
      lin[0] = spec.l_infinity - x0;
      path.values[0] = x0;
      for (std::size_t i = 0; i < grid.n; ++i) {
        log_gap += mean - sd * stream.normal();
        lin[i + 1] = std::exp(log_gap);
        path.values[i + 1] = spec.l_infinity - lin[i + 1];
      }
      break;
    }
    case ModelKind::Logistic:
      throw UnsupportedModelError(
          "exact_simulate: no exact transition for the Logistic model; use "
          "logistic_solution_simulate");
  }
  path.linear = LinearChannel{spec.kind, spec.l_infinity, std::move(lin)};
  return path;
}

Path logistic_solution_simulate(ModelSpec const& spec, double x0,
                                TimeGrid const& grid, RngStream& stream) {
  if (spec.kind != ModelKind::Logistic) {
    throw UnsupportedModelError(
        "logistic_solution_simulate: model must be logistic");
  }
  spec.validate();
  grid.validate();
  if (!(x0 > 0.0 && x0 < 1.0)) {
    throw DomainError("logistic_solution_simulate: p0 must lie in (0, 1)");
  }
  double const dt = grid.step();
  double const sqrt_dt = std::sqrt(dt);
  double const growth = spec.drift - 0.5 * spec.sigma * spec.sigma;

  Path path;
  path.grid = grid;
  path.values.resize(grid.n + 1);
  path.values[0] = x0;
  double w = 0.0;
  double f_prev = 1.0;
  double integral = 0.0;
  for (std::size_t i = 1; i <= grid.n; ++i) {
    w += sqrt_dt * stream.normal();
    double const elapsed = grid.time(i) - grid.t0;
    double const f = std::exp(elapsed * growth + spec.sigma * w);
    integral += 0.5 * (f + f_prev) * dt;
    path.values[i] = f / (1.0 / x0 + spec.drift * integral);
    f_prev = f;
  }
  return path;
}

Path simulate(Simulator sim, ModelSpec const& spec, double x0,
              TimeGrid const& grid, RngStream& stream) {
  switch (sim) {
    case Simulator::Milstein:
      return milstein_simulate(spec, x0, grid, stream);
    case Simulator::Exact:
      return exact_simulate(spec, x0, grid, stream);
    case Simulator::Solution:
      return logistic_solution_simulate(spec, x0, grid, stream);
  }
  throw ValidationError("unknown simulator");
}

double sample_beta_init(double alpha, double beta, RngStream& stream) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta)) {
    throw ValidationError("beta parameters must be finite and > 0");
  }
  for (;;) {
    double const x = stream.gamma(alpha);
    double const y = stream.gamma(beta);
    double const v = x / (x + y);
    if (v > 0.0 && v < 1.0) return v;
  }
}

}  // namespace growthsde
