#include "growthsde/em.hpp"

#include <cmath>
#include <string>

#include "growthsde/bridge.hpp"
#include "growthsde/errors.hpp"
#include "growthsde/mle.hpp"

namespace growthsde {
namespace {

constexpr std::size_t kMaxSweeps = 10;

std::string at_iteration(std::size_t k, char const* what) {
  return "EM iteration " + std::to_string(k) + ": " + what;
}

EmTrace run(ModelKind kind, ObservationSet const& obs, double l_infinity,
            EmConfig const& cfg, RngStream const& stream) {
  cfg.validate();
  obs.validate();
  EmTrace trace;
  trace.kind = kind;
  if (cfg.theta0) {
    trace.theta0 = *cfg.theta0;
  } else {
    auto const est = estimate_continuous(kind, obs, l_infinity);
    trace.theta0 = {est.drift, est.sigma};
  }

  Theta theta = trace.theta0;
  trace.drift.reserve(cfg.iterations);
  trace.sigma.reserve(cfg.iterations);
  for (std::size_t k = 1; k <= cfg.iterations; ++k) {
    ModelSpec spec;
    try {
      spec = ModelSpec::make(kind, theta.drift, theta.sigma, l_infinity);
    } catch (ValidationError const& e) {
      throw NumericalError(at_iteration(k, e.what()));
    }
    RngStream const base = stream.child(k);
    Path fine;
    for (std::size_t sweep = 0;; ++sweep) {
      RngStream sub = sweep == 0 ? base : base.child(sweep);
      ImputeOptions opts;
      opts.crossing_fallback = sweep >= kMaxSweeps;
      try {
        fine = impute(spec, obs, cfg.delta_target, sub, opts);
        trace.bridge_fallbacks += fine.fallback_count;
        break;
      } catch (NoCrossingError const&) {
        ++trace.sweep_resamples;
      }
    }
    try {
      auto const est = estimate_continuous(kind, fine, l_infinity);
      theta = {est.drift, est.sigma};
    } catch (NumericalError const& e) {
      throw NumericalError(at_iteration(k, e.what()));
    } catch (DomainError const& e) {
      throw DomainError(at_iteration(k, e.what()));
    }
    trace.drift.push_back(theta.drift);
    trace.sigma.push_back(theta.sigma);
  }
  trace.drift_ml = burn_in_average(trace.drift, cfg.burn_in);
  trace.sigma_ml = burn_in_average(trace.sigma, cfg.burn_in);
  return trace;
}

}  // namespace

void EmConfig::validate() const {
  if (iterations < 2) throw ValidationError("em: iterations must be >= 2");
  if (burn_in >= iterations) {
    throw ValidationError("em: burn_in must be < iterations");
  }
  if (!(delta_target > 0.0) || !std::isfinite(delta_target)) {
    throw ValidationError("em: delta_target must be finite and > 0");
  }
  if (theta0 && !(theta0->drift > 0.0 && theta0->sigma > 0.0)) {
    throw ValidationError("em: theta0 components must be > 0");
  }
}

double burn_in_average(std::span<double const> trace, std::size_t burn_in) {
  if (burn_in >= trace.size()) {
    throw ValidationError("burn-in leaves no iterates to average");
  }
  // Summing offsets from the first retained iterate keeps a constant trace
  // exact.
  auto const tail = trace.subspan(burn_in);
  double const ref = tail.front();
  double offset = 0.0;
  for (double x : tail) offset += x - ref;
  return ref + offset / static_cast<double>(tail.size());
}

EmTrace em_gompertz(ObservationSet const& obs, EmConfig const& cfg,
                    RngStream const& stream) {
  return run(ModelKind::Gompertz, obs, 1.0, cfg, stream);
}

EmTrace em_vonbert(ObservationSet const& obs, double l_infinity,
                   EmConfig const& cfg, RngStream const& stream) {
  return run(ModelKind::VonBertalanffy, obs, l_infinity, cfg, stream);
}

EmTrace em_logistic(ObservationSet const& obs, EmConfig const& cfg,
                    RngStream const& stream) {
  return run(ModelKind::Logistic, obs, 1.0, cfg, stream);
}

EmTrace run_em(ModelKind kind, ObservationSet const& obs, double l_infinity,
               EmConfig const& cfg, RngStream const& stream) {
  return run(kind, obs, l_infinity, cfg, stream);
}

}  // namespace growthsde
