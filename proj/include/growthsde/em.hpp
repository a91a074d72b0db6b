#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "growthsde/model.hpp"
#include "growthsde/path.hpp"
#include "growthsde/rng.hpp"

namespace growthsde {

struct Theta {
  double drift = 0.0;
  double sigma = 0.0;
};

struct EmConfig {
  std::size_t iterations = 100;
  std::size_t burn_in = 50;
  double delta_target = 0.01;
  /// Starting point. When empty the model's closed-form estimator is applied
  /// directly to the sparse observations.
  std::optional<Theta> theta0;

  void validate() const;
};

struct EmTrace {
  ModelKind kind = ModelKind::Gompertz;
  Theta theta0;
  /// Iterate k = 1..K is stored at index k - 1.
  std::vector<double> drift;
  std::vector<double> sigma;
  double drift_ml = 0.0;
  double sigma_ml = 0.0;
  /// Whole E-step sweeps redrawn after a bridge found no crossing.
  std::size_t sweep_resamples = 0;
  /// Intervals bridged by log_brownian_bridge after every sweep failed.
  std::size_t bridge_fallbacks = 0;
};

/// Mean of the iterates after the first `burn_in`, i.e. of K - K0 values.
double burn_in_average(std::span<double const> trace, std::size_t burn_in);

/// Stochastic EM: iteration k imputes the fine path with bridges at
/// theta_{k-1} drawn from stream.child(k), then re-estimates theta_k with the
/// closed-form estimator on that path.
EmTrace em_gompertz(ObservationSet const& obs, EmConfig const& cfg,
                    RngStream const& stream);
EmTrace em_vonbert(ObservationSet const& obs, double l_infinity,
                   EmConfig const& cfg, RngStream const& stream);
/// A sweep whose crossing bridge fails is redrawn up to 10 times. If all of
/// them fail, one more sweep bridges the stuck intervals with
/// log_brownian_bridge (counted in EmTrace::bridge_fallbacks).
EmTrace em_logistic(ObservationSet const& obs, EmConfig const& cfg,
                    RngStream const& stream);

EmTrace run_em(ModelKind kind, ObservationSet const& obs, double l_infinity,
               EmConfig const& cfg, RngStream const& stream);

}  // namespace growthsde
