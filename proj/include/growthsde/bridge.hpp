#pragma once

#include <cstddef>
#include <vector>

#include "growthsde/model.hpp"
#include "growthsde/path.hpp"
#include "growthsde/rng.hpp"

namespace growthsde {

/// Bridge from state a at t1 to state b at t2 on `substeps` equal sub-steps.
struct BridgeRequest {
  double a = 0.0;
  double t1 = 0.0;
  double b = 0.0;
  double t2 = 1.0;
  std::size_t substeps = 1;

  void validate() const;
  double step() const noexcept {
    return (t2 - t1) / static_cast<double>(substeps);
  }
};

struct BridgePath {
  std::vector<double> times;
  std::vector<double> values;
  /// Forward/backward pairs drawn by bs_bridge; 1 for the Gaussian bridges.
  std::size_t attempts_used = 1;
};

inline constexpr std::size_t kDefaultMaxAttempts = 100;

/// Exact bridge of dY = (-b Y - sigma^2/2) dt + sigma dW, the OU process of
/// ln X under the Gompertz model. Endpoints are in the Y coordinate.
BridgePath ou_bridge(double b_param, double sigma, BridgeRequest const& req,
                     RngStream& stream);

/// Brownian bridge with scale sigma. The drift of a Brownian motion with drift
/// does not enter its bridge law, so it is not a parameter.
BridgePath bm_bridge(double sigma, BridgeRequest const& req, RngStream& stream);

/// Crossing bridge: a forward Milstein path from a is spliced with the time
/// reversal of an independent forward path from b at their first crossing.
/// Throws NoCrossingError when no pair crosses within max_attempts.
BridgePath bs_bridge(ModelSpec const& spec, BridgeRequest const& req,
                     RngStream& stream,
                     std::size_t max_attempts = kDefaultMaxAttempts);

/// Brownian bridge with scale sigma in the coordinate where the diffusion is
/// constant (ln x for Gompertz and Logistic, ln(l_infinity - x) for Von
/// Bertalanffy), mapped back to the state space. It ignores the drift
/// curvature inside the interval; impute uses it only as a last resort when
/// the crossing bridge cannot connect an interval.
BridgePath log_brownian_bridge(ModelSpec const& spec, BridgeRequest const& req,
                               RngStream& stream);

struct ImputeOptions {
  /// Bridge intervals whose crossing bridge exhausts its attempts with
  /// log_brownian_bridge instead of throwing NoCrossingError. Each such
  /// interval is counted in Path::fallback_count.
  bool crossing_fallback = false;
};

/// Fills every observation gap with a bridge of round(gap / delta_target)
/// sub-steps (at least one) and concatenates them into one fine path that
/// passes through the observations exactly. Interval i draws from
/// stream.child(i). Observations must be uniformly spaced.
///
/// Gompertz bridges run in ln x, Von Bertalanffy in ln(l_infinity - x), both
/// exactly; Logistic uses bs_bridge. The fine path carries a linear channel
/// for the first two.
Path impute(ModelSpec const& spec, ObservationSet const& obs,
            double delta_target, RngStream& stream,
            ImputeOptions const& opts = {});

}  // namespace growthsde
