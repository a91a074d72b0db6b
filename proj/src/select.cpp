#include "growthsde/select.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <string>

#include "growthsde/errors.hpp"
#include "growthsde/mle.hpp"
#include "growthsde/parallel.hpp"

namespace growthsde {

GirsanovCoefficients girsanov_coefficients(GirsanovShape const& shape,
                                           double sigma,
                                           ObservationSet const& obs) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("girsanov: sigma must be finite and > 0");
  }
  obs.validate();
  double a = 0.0;
  double b = 0.0;
  for (std::size_t i = 1; i < obs.size(); ++i) {
    double const x = obs.values[i - 1];
    double const g = shape.g(x);
    if (g == 0.0) {
      throw DomainError("girsanov: diffusion shape vanishes at index " +
                        std::to_string(i - 1));
    }
    double const f = shape.f(x);
    double const w = f / (g * g);
    a += w * (obs.values[i] - x);
    b += w * f * (obs.times[i] - obs.times[i - 1]);
  }
  double const s2 = sigma * sigma;
  return {a / s2, b / s2};
}

double girsanov_loglik(GirsanovShape const& shape, double alpha, double sigma,
                       ObservationSet const& obs) {
  return girsanov_coefficients(shape, sigma, obs).loglik(alpha);
}

double transition_loglik(GirsanovShape const& shape, double alpha, double sigma,
                         ObservationSet const& obs) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("transition likelihood: sigma must be finite and > 0");
  }
  obs.validate();
  double ll = 0.0;
  for (std::size_t i = 1; i < obs.size(); ++i) {
    double const x = obs.values[i - 1];
    double const dt = obs.times[i] - obs.times[i - 1];
    double const g = shape.g(x);
    if (g == 0.0) {
      throw DomainError("transition likelihood: diffusion shape vanishes at index " +
                        std::to_string(i - 1));
    }
    double const var = sigma * sigma * g * g * dt;
    double const r = obs.values[i] - x - alpha * shape.f(x) * dt;
    ll += -0.5 * std::log(2.0 * std::numbers::pi * var) - r * r / (2.0 * var);
  }
  return ll;
}

std::string_view to_string(SelectionLikelihood lik) {
  return lik == SelectionLikelihood::Full ? "full" : "girsanov";
}

SelectionLikelihood parse_selection_likelihood(std::string_view name) {
  if (name == "full") return SelectionLikelihood::Full;
  if (name == "girsanov") return SelectionLikelihood::Girsanov;
  throw ValidationError("unknown likelihood '" + std::string(name) +
                        "' (full, girsanov)");
}

double aic(double loglik, int k) {
  if (k < 0) throw ValidationError("aic: k must be >= 0");
  return -2.0 * loglik + 2.0 * k;
}

double SelectionReport::margin(ModelKind kind) const {
  return fit(kind).aic - fit(winner).aic;
}

SelectionReport fit_all_and_rank(ObservationSet const& obs, double l_infinity,
                                 int k, SelectionLikelihood lik) {
  obs.validate();
  if (k < 0) throw ValidationError("fit_all_and_rank: k must be >= 0");
  SelectionReport report;
  report.k = k;
  report.likelihood = lik;
  for (ModelKind kind : kAllModels) {
    FitResult& fit = report.fits[static_cast<std::size_t>(kind)];
    fit.kind = kind;
    try {
      auto const est = estimate_continuous(kind, obs, l_infinity);
      fit.drift_hat = est.drift;
      fit.sigma_hat = est.sigma;
      GirsanovShape const shape(kind, l_infinity);
      fit.girsanov_loglik = girsanov_loglik(shape, est.drift, est.sigma, obs);
      fit.loglik = lik == SelectionLikelihood::Full
                       ? transition_loglik(shape, est.drift, est.sigma, obs)
                       : fit.girsanov_loglik;
      if (!std::isfinite(fit.loglik)) {
        throw NumericalError("non-finite log-likelihood");
      }
      fit.aic = aic(fit.loglik, k);
    } catch (std::exception const& e) {
      fit.failure = e.what();
      fit.girsanov_loglik = -std::numeric_limits<double>::infinity();
      fit.loglik = -std::numeric_limits<double>::infinity();
      fit.aic = std::numeric_limits<double>::infinity();
    }
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return report.fits[l].aic < report.fits[r].aic;
  });
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    report.fits[order[pos]].rank = pos + 1;
  }
  report.winner = report.fits[order[0]].kind;
  return report;
}

double X0Policy::draw(RngStream& stream) const {
  if (kind == Kind::Beta) return sample_beta_init(beta_a, beta_b, stream);
  return x0;
}

PcResult pc_estimate(ModelSpec const& truth, std::size_t reps,
                     TimeGrid const& grid, X0Policy const& x0, int k,
                     RngStream const& stream, Simulator sim, unsigned threads,
                     SelectionLikelihood lik) {
  if (reps < 1) throw ValidationError("pc_estimate: reps must be >= 1");
  truth.validate();
  grid.validate();
  PcResult result;
  result.reps = reps;
  result.records.resize(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    PcRecord& rec = result.records[r];
    rec.rep = r;
    try {
      RngStream sub = stream.child(r);
      double const start = x0.draw(sub);
      Path const path = simulate(sim, truth, start, grid, sub);
      auto const report = fit_all_and_rank(path, truth.l_infinity, k, lik);
      if (!report.fit(report.winner).ok()) {
        throw NumericalError("no model could be fitted");
      }
      rec.winner = report.winner;
      rec.correct = report.winner == truth.kind;
    } catch (std::exception const& e) {
      rec.failure = e.what();
      rec.correct = false;
    }
  });
  for (auto const& rec : result.records) result.nc += rec.correct ? 1 : 0;
  result.pc = static_cast<double>(result.nc) / static_cast<double>(reps);
  return result;
}

}  // namespace growthsde
