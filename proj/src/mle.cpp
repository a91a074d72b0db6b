#include "growthsde/mle.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "growthsde/errors.hpp"

namespace growthsde {
namespace {

constexpr std::size_t kMinIncrements = 3;

double spacing(ObservationSet const& obs) {
  double const dt = obs.uniform_step();
  if (obs.size() - 1 < kMinIncrements) {
    throw ValidationError("estimator needs at least 3 increments");
  }
  return dt;
}

std::vector<double> gompertz_logs(ObservationSet const& obs) {
  for (double x : obs.values) {
    if (!(x > 0.0)) throw DomainError("gompertz: observations must be > 0");
  }
  return linear_coordinates(ModelKind::Gompertz, 1.0, obs.values, obs.linear);
}

std::vector<double> log_gaps(ObservationSet const& obs, double l_infinity) {
  if (!(l_infinity > 0.0)) {
    throw ValidationError("l_infinity must be > 0");
  }
  std::vector<double> g;
  if (obs.linear && obs.linear->matches(ModelKind::VonBertalanffy, l_infinity)) {
    g = obs.linear->values;
  } else {
    g.reserve(obs.size());
    for (double x : obs.values) g.push_back(l_infinity - x);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0)) {
      throw DomainError("von bertalanffy: l_infinity - x <= 0 at index " +
                        std::to_string(i));
    }
    g[i] = std::log(g[i]);
  }
  return g;
}

// Profile of the exact OU log-likelihood in b, sigma^2 maximized out.
struct GompertzProfile {
  std::vector<double> const& y;
  double dt;

  struct Point {
    double loglik;
    double s2;
  };

  Point at(double b) const {
    std::size_t const n = y.size() - 1;
    auto const nd = static_cast<double>(n);
    double const phi = std::exp(-b * dt);
    double const c = -std::expm1(-b * dt) / (2.0 * b);
    double const k = -std::expm1(-2.0 * b * dt) / (2.0 * b);
    double ss = 0.0;
    double sr = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      double const r = y[i] - phi * y[i - 1];
      ss += r * r;
      sr += r;
    }
    // Positive root of c^2 n s^2 + n k s - ss = 0, rationalized.
    double s2 = 2.0 * ss / (nd * k + std::sqrt(nd * nd * k * k + 4.0 * c * c * nd * ss));
    s2 = std::max(s2, 1e-300);
    double const q = ss + 2.0 * s2 * c * sr + s2 * s2 * c * c * nd;
    double const var = s2 * k;
    return {-0.5 * nd * std::log(2.0 * std::numbers::pi * var) - q / (2.0 * var),
            s2};
  }
};

}  // namespace

GompertzRegression gompertz_regression(ObservationSet const& obs) {
  spacing(obs);
  auto const y = gompertz_logs(obs);
  std::size_t const n = y.size() - 1;
  auto const nd = static_cast<double>(n);
  double m0 = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    m0 += y[i - 1];
    m1 += y[i];
  }
  m0 /= nd;
  m1 /= nd;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    sxy += (y[i - 1] - m0) * (y[i] - m1);
    sxx += (y[i - 1] - m0) * (y[i - 1] - m0);
  }
  if (!(sxx > 0.0)) {
    throw NumericalError("gompertz: constant path, slope undefined");
  }
  GompertzRegression reg;
  reg.c1 = sxy / sxx;
  reg.c2 = m1 - reg.c1 * m0;
  for (std::size_t i = 1; i <= n; ++i) {
    double const r = y[i] - reg.c1 * y[i - 1] - reg.c2;
    reg.c3 += r * r;
  }
  reg.c3 /= nd;
  return reg;
}

EstimateCont gompertz_mle(ObservationSet const& obs) {
  double const dt = spacing(obs);
  auto const reg = gompertz_regression(obs);
  if (!(reg.c1 > 0.0 && reg.c1 < 1.0)) {
    throw NumericalError("gompertz: lag-1 slope c1 = " + std::to_string(reg.c1) +
                         " outside (0, 1), no admissible rate");
  }
  auto const y = gompertz_logs(obs);
  GompertzProfile const profile{y, dt};

  double const start = std::log(-std::log(reg.c1) / dt);
  double lo = start - 3.0;
  double hi = start + 3.0;
  constexpr int kBits = std::numeric_limits<double>::digits / 2;
  std::uintmax_t iters = 500;
  auto objective = [&](double u) { return -profile.at(std::exp(u)).loglik; };
  auto best = boost::math::tools::brent_find_minima(objective, lo, hi, kBits, iters);
  // The profile is unimodal in practice; widen if the optimum hit an edge.
  for (int widen = 0; widen < 4; ++widen) {
    if (best.first - lo > 1e-6 && hi - best.first > 1e-6) break;
    lo -= 4.0;
    hi += 4.0;
    iters = 500;
    best = boost::math::tools::brent_find_minima(objective, lo, hi, kBits, iters);
  }
  double const b = std::exp(best.first);
  auto const point = profile.at(b);
  return {ModelKind::Gompertz, b, std::sqrt(point.s2), y.size() - 1};
}

double gompertz_loglik(ObservationSet const& obs, double b, double sigma) {
  if (!(b > 0.0) || !(sigma > 0.0)) {
    throw ValidationError("gompertz_loglik: b and sigma must be > 0");
  }
  double const dt = spacing(obs);
  auto const y = gompertz_logs(obs);
  double const s2 = sigma * sigma;
  double const phi = std::exp(-b * dt);
  double const shift = -s2 / (2.0 * b) * -std::expm1(-b * dt);
  double const var = s2 * -std::expm1(-2.0 * b * dt) / (2.0 * b);
  double ll = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    double const r = y[i] - phi * y[i - 1] - shift;
    ll += -0.5 * std::log(2.0 * std::numbers::pi * var) - r * r / (2.0 * var);
  }
  return ll;
}

VonBertalanffySums vonbert_sums(ObservationSet const& obs, double l_infinity) {
  spacing(obs);
  auto const lg = log_gaps(obs, l_infinity);
  VonBertalanffySums s;
  for (std::size_t i = 1; i < lg.size(); ++i) {
    s.a += lg[i];
    s.b += lg[i - 1];
    s.c += lg[i] * lg[i];
    s.d += lg[i - 1] * lg[i];
    s.e += lg[i - 1] * lg[i - 1];
  }
  return s;
}

EstimateCont vonbert_mle(ObservationSet const& obs, double l_infinity) {
  double const dt = spacing(obs);
  auto const lg = log_gaps(obs, l_infinity);
  std::size_t const n = lg.size() - 1;
  auto const nd = static_cast<double>(n);
  double const horizon = nd * dt;
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) sum += lg[i] - lg[i - 1];
  double const mean = sum / nd;
  double centered = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double const d = lg[i] - lg[i - 1] - mean;
    centered += d * d;
  }
  double const s2 = centered / horizon;
  if (s2 < 0.0 || !std::isfinite(s2)) {
    throw NumericalError("von bertalanffy: negative variance estimate");
  }
  double const kappa = -sum / horizon - 0.5 * s2;
  return {ModelKind::VonBertalanffy, kappa, std::sqrt(s2), n};
}

double vonbert_loglik(ObservationSet const& obs, double l_infinity,
                      double kappa, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("vonbert_loglik: sigma must be > 0");
  double const dt = spacing(obs);
  auto const lg = log_gaps(obs, l_infinity);
  double const mean = -(kappa + 0.5 * sigma * sigma) * dt;
  double const var = sigma * sigma * dt;
  double ll = 0.0;
  for (std::size_t i = 1; i < lg.size(); ++i) {
    double const r = lg[i] - lg[i - 1] - mean;
    ll += -0.5 * std::log(2.0 * std::numbers::pi * var) - r * r / (2.0 * var) -
          lg[i];
  }
  return ll;
}

double logistic_sigma_qv(ObservationSet const& obs) {
  double const dt = obs.uniform_step();
  double qv = 0.0;
  double level = 0.0;
  for (std::size_t i = 1; i < obs.size(); ++i) {
    double const p0 = obs.values[i - 1];
    double const p1 = obs.values[i];
    qv += (p1 - p0) * (p1 - p0);
    level += p1 * p1 + p0 * p0;
  }
  if (!(level > 0.0)) {
    throw NumericalError("logistic: zero path, sigma undefined");
  }
  return std::sqrt(2.0 * qv / (level * dt));
}

LogisticSums logistic_r_sums(ObservationSet const& obs) {
  double const dt = obs.uniform_step();
  LogisticSums s;
  for (std::size_t i = 1; i < obs.size(); ++i) {
    double const p = obs.values[i - 1];
    if (!(p > 0.0)) {
      throw DomainError("logistic: p_{i-1} <= 0 at index " +
                        std::to_string(i - 1));
    }
    s.numerator += (1.0 - p) * (obs.values[i] - p) / p;
    s.denominator += (1.0 - p) * (1.0 - p) * dt;
  }
  return s;
}

double logistic_r_mle(ObservationSet const& obs, double /*sigma_hat*/) {
  auto const s = logistic_r_sums(obs);
  if (!(s.denominator > 0.0)) {
    throw NumericalError("logistic: path sits at p = 1, rate undefined");
  }
  return s.numerator / s.denominator;
}

EstimateCont logistic_mle(ObservationSet const& obs) {
  double const sigma = logistic_sigma_qv(obs);
  double const r = logistic_r_mle(obs, sigma);
  return {ModelKind::Logistic, r, sigma, obs.size() - 1};
}

EstimateCont estimate_continuous(ModelKind kind, ObservationSet const& obs,
                                 double l_infinity) {
  switch (kind) {
    case ModelKind::Gompertz:
      return gompertz_mle(obs);
    case ModelKind::VonBertalanffy:
      return vonbert_mle(obs, l_infinity);
    case ModelKind::Logistic:
      return logistic_mle(obs);
  }
  throw UnsupportedModelError("unknown model kind");
}

}  // namespace growthsde
