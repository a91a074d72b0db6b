#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "growthsde/model.hpp"
#include "growthsde/path.hpp"
#include "growthsde/rng.hpp"
#include "growthsde/simulate.hpp"

namespace growthsde {

/// logL(alpha) = alpha A - alpha^2 B / 2 with
///   A = sum F(x_{i-1}) / (sigma^2 G^2(x_{i-1})) (x_i - x_{i-1}),
///   B = sum F^2(x_{i-1}) / (sigma^2 G^2(x_{i-1})) (t_i - t_{i-1}).
struct GirsanovCoefficients {
  double a = 0.0;
  double b = 0.0;

  double loglik(double alpha) const { return alpha * a - 0.5 * alpha * alpha * b; }
  /// Maximizer A / B.
  double argmax() const { return a / b; }
};

/// Left-endpoint (Ito) sums; throws DomainError where G vanishes.
GirsanovCoefficients girsanov_coefficients(GirsanovShape const& shape,
                                           double sigma,
                                           ObservationSet const& obs);
double girsanov_loglik(GirsanovShape const& shape, double alpha, double sigma,
                       ObservationSet const& obs);
inline double girsanov_loglik(GirsanovShape const& shape, double alpha,
                              double sigma, Path const& path) {
  return girsanov_loglik(shape, alpha, sigma, to_observations(path));
}

/// Gaussian log-density of the increments under the Euler transition
///   x_i | x_{i-1} ~ N(x_{i-1} + alpha F dt, sigma^2 G^2 dt),
/// i.e. the Girsanov log-likelihood plus the log-density of the driftless
/// reference model dX = sigma G dW. Unlike the Girsanov ratio alone it is a
/// density with respect to a measure shared by all models and all sigma.
double transition_loglik(GirsanovShape const& shape, double alpha, double sigma,
                         ObservationSet const& obs);

/// -2 loglik + 2k.
double aic(double loglik, int k);

/// Which log-likelihood the AIC is computed from.
enum class SelectionLikelihood {
  /// Girsanov drift likelihood plus the reference density (the Euler
  /// transition likelihood); comparable across models.
  Full,
  /// Girsanov drift likelihood only. Each model's ratio is relative to its
  /// own reference measure, so values are not comparable across models.
  Girsanov,
};

std::string_view to_string(SelectionLikelihood lik);
SelectionLikelihood parse_selection_likelihood(std::string_view name);

struct FitResult {
  ModelKind kind = ModelKind::Gompertz;
  double drift_hat = 0.0;
  double sigma_hat = 0.0;
  double girsanov_loglik = 0.0;
  /// The log-likelihood entering the AIC.
  double loglik = 0.0;
  /// +inf when the model could not be fitted; `failure` says why.
  double aic = 0.0;
  std::size_t rank = 0;
  std::string failure;

  bool ok() const { return failure.empty(); }
};

struct SelectionReport {
  /// In model order Gompertz, Von Bertalanffy, Logistic.
  std::array<FitResult, 3> fits;
  ModelKind winner = ModelKind::Gompertz;
  int k = 2;
  SelectionLikelihood likelihood = SelectionLikelihood::Full;

  FitResult const& fit(ModelKind kind) const {
    return fits[static_cast<std::size_t>(kind)];
  }
  /// AIC of `kind` minus the winner's AIC.
  double margin(ModelKind kind) const;
};

/// Fits each model with its closed-form estimator, scores it at its own
/// (drift, sigma) and ranks by AIC. Ties go to the earlier model in the
/// order above. A model that cannot be fitted gets AIC = +inf and a failure
/// reason instead of aborting.
SelectionReport fit_all_and_rank(
    ObservationSet const& obs, double l_infinity, int k = 2,
    SelectionLikelihood lik = SelectionLikelihood::Full);
inline SelectionReport fit_all_and_rank(
    Path const& path, double l_infinity, int k = 2,
    SelectionLikelihood lik = SelectionLikelihood::Full) {
  return fit_all_and_rank(to_observations(path), l_infinity, k, lik);
}

/// Initial condition of each simulated path.
struct X0Policy {
  enum class Kind { Fixed, Beta };
  Kind kind = Kind::Fixed;
  double x0 = 0.01;
  double beta_a = 1.0;
  double beta_b = 100.0;

  static X0Policy fixed(double x0) { return {Kind::Fixed, x0, 1.0, 100.0}; }
  static X0Policy beta(double a, double b) { return {Kind::Beta, 0.0, a, b}; }
  double draw(RngStream& stream) const;
};

struct PcRecord {
  std::size_t rep = 0;
  std::optional<ModelKind> winner;
  bool correct = false;
  std::string failure;
};

struct PcResult {
  double pc = 0.0;
  std::size_t nc = 0;
  std::size_t reps = 0;
  std::vector<PcRecord> records;
};

/// Monte Carlo probability of selecting the true model. Replication r
/// simulates from stream.child(r); failed replications count as incorrect.
/// Results do not depend on `threads`.
PcResult pc_estimate(ModelSpec const& truth, std::size_t reps,
                     TimeGrid const& grid, X0Policy const& x0, int k,
                     RngStream const& stream,
                     Simulator sim = Simulator::Milstein, unsigned threads = 0,
                     SelectionLikelihood lik = SelectionLikelihood::Full);

}  // namespace growthsde
