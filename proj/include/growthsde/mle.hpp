#pragma once

#include <cstddef>

#include "growthsde/model.hpp"
#include "growthsde/path.hpp"

namespace growthsde {

/// Lag-1 least squares of y_i = ln x_i on y_{i-1}: slope c1, intercept c2,
/// mean squared residual c3.
struct GompertzRegression {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// Log-gap sums with g_i = l_infinity - x_i, over i = 1..n:
/// a = sum ln g_i, b = sum ln g_{i-1}, c = sum ln^2 g_i,
/// d = sum ln g_{i-1} ln g_i, e = sum ln^2 g_{i-1}.
struct VonBertalanffySums {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
};

/// Numerator and denominator of the Logistic growth-rate estimator.
struct LogisticSums {
  double numerator = 0.0;
  double denominator = 0.0;
};

/// Continuous-observation estimate of (drift parameter, sigma).
struct EstimateCont {
  ModelKind kind = ModelKind::Gompertz;
  double drift = 0.0;
  double sigma = 0.0;
  std::size_t n_used = 0;
};

GompertzRegression gompertz_regression(ObservationSet const& obs);

/// Maximum likelihood (b, sigma) under the exact OU transition of ln X:
///   ln X_i | ln X_{i-1} ~ N(e^{-b dt} y - (sigma^2/2b)(1 - e^{-b dt}),
///                           sigma^2 (1 - e^{-2 b dt}) / 2b).
/// sigma^2 is profiled out in closed form and b maximized by Brent's method,
/// starting from b = -ln(c1)/dt of the lag-1 regression.
///
/// Throws NumericalError when c1 is outside (0, 1), ValidationError on
/// non-uniform spacing or fewer than 3 increments.
EstimateCont gompertz_mle(ObservationSet const& obs);

/// Log-likelihood of the exact Gompertz transition density.
double gompertz_loglik(ObservationSet const& obs, double b, double sigma);

VonBertalanffySums vonbert_sums(ObservationSet const& obs, double l_infinity);

/// sigma^2 = (n sum d^2 - (sum d)^2) / (n T) with d_i = ln g_i - ln g_{i-1},
/// kappa = (b - a)/T - sigma^2/2.
EstimateCont vonbert_mle(ObservationSet const& obs, double l_infinity);

/// Log-likelihood of the log-normal transition of g = l_infinity - L.
double vonbert_loglik(ObservationSet const& obs, double l_infinity,
                      double kappa, double sigma);

/// Quadratic-variation estimate
///   sigma^2 = 2 sum (p_i - p_{i-1})^2 / (sum (p_i^2 + p_{i-1}^2) dt).
double logistic_sigma_qv(ObservationSet const& obs);

/// Left-endpoint sums sum (1 - p)(dp)/p and sum (1 - p)^2 dt.
LogisticSums logistic_r_sums(ObservationSet const& obs);

/// numerator / denominator of logistic_r_sums. sigma_hat cancels and is only
/// accepted to mirror the other estimators.
double logistic_r_mle(ObservationSet const& obs, double sigma_hat);

EstimateCont logistic_mle(ObservationSet const& obs);

/// The model's own closed-form estimator.
EstimateCont estimate_continuous(ModelKind kind, ObservationSet const& obs,
                                 double l_infinity = 1.0);

inline EstimateCont estimate_continuous(ModelKind kind, Path const& path,
                                        double l_infinity = 1.0) {
  return estimate_continuous(kind, to_observations(path), l_infinity);
}

}  // namespace growthsde
