#include <doctest.h>

#include <cmath>
#include <vector>

#include "growthsde/errors.hpp"
#include "growthsde/mle.hpp"
#include "growthsde/select.hpp"
#include "growthsde/simulate.hpp"

using namespace growthsde;

namespace {

Path simulated(ModelKind k, double sigma, std::uint64_t seed, Simulator sim = Simulator::Milstein) {
  auto const spec = ModelSpec::make(k, 0.6, sigma);
  RngStream s(seed, 0);
  return simulate(sim, spec, 0.01, TimeGrid::make(0.0, 10.0, 10000), s);
}

}  // namespace

TEST_SUITE("select") {

TEST_CASE("AIC values") {
  CHECK(aic(460.545, 1) == doctest::Approx(-919.09));
  CHECK(aic(0.0, 1) == 2.0);
  CHECK(aic(100.0, 2) == -196.0);
  CHECK_THROWS_AS(aic(1.0, -1), ValidationError);
}

TEST_CASE("Girsanov log-likelihood is the quadratic form of its sums") {
  auto const obs = to_observations(simulated(ModelKind::Logistic, 0.1, 1));
  GirsanovShape const shape(ModelKind::Logistic);
  double a = 0.0, b = 0.0;
  double const s2 = 0.01;
  for (std::size_t i = 1; i < obs.size(); ++i) {
    double const x = obs.values[i - 1];
    double const f = x * (1 - x), g = x;
    a += f / (s2 * g * g) * (obs.values[i] - x);
    b += f * f / (s2 * g * g) * (obs.times[i] - obs.times[i - 1]);
  }
  for (double alpha : {0.0, 0.3, 0.6, 1.2}) {
    CHECK(girsanov_loglik(shape, alpha, 0.1, obs) ==
          doctest::Approx(alpha * a - 0.5 * alpha * alpha * b).epsilon(1e-10));
  }
  auto const c = girsanov_coefficients(shape, 0.1, obs);
  CHECK(c.argmax() == doctest::Approx(logistic_r_mle(obs, 0.1)).epsilon(1e-10));
}

TEST_CASE("transition log-likelihood adds the reference density") {
  auto const obs = to_observations(simulated(ModelKind::Gompertz, 0.1, 2));
  GirsanovShape const shape(ModelKind::Gompertz);
  double ref = 0.0;
  for (std::size_t i = 1; i < obs.size(); ++i) {
    double const x = obs.values[i - 1];
    double const dt = obs.times[i] - obs.times[i - 1];
    double const v = 0.01 * x * x * dt;
    double const d = obs.values[i] - x;
    ref += -0.5 * std::log(2 * M_PI * v) - d * d / (2 * v);
  }
  CHECK(transition_loglik(shape, 0.6, 0.1, obs) ==
        doctest::Approx(girsanov_loglik(shape, 0.6, 0.1, obs) + ref).epsilon(1e-10));
}

TEST_CASE("Girsanov grid argmax agrees with the exact Gompertz MLE") {
  auto const obs = to_observations(simulated(ModelKind::Gompertz, 0.1, 3, Simulator::Exact));
  GirsanovShape const shape(ModelKind::Gompertz);
  auto const est = gompertz_mle(obs);
  double best = 0.0, best_ll = -INFINITY;
  for (double alpha = 0.3; alpha <= 0.9; alpha += 1e-3) {
    double const ll = girsanov_loglik(shape, alpha, est.sigma, obs);
    if (ll > best_ll) best_ll = ll, best = alpha;
  }
  CHECK(std::abs(best - est.drift) < 2e-3);
}

TEST_CASE("the true model wins on clear cases") {
  for (ModelKind k : kAllModels) {
    CAPTURE(to_string(k));
    auto const report = fit_all_and_rank(simulated(k, 0.1, 4), 1.0);
    CHECK(report.winner == k);
    CHECK(report.fit(k).rank == 1);
    CHECK(report.margin(k) == 0.0);
    CHECK(report.fit(k).ok());
  }
}

TEST_CASE("ranks are a permutation ordered by AIC") {
  auto const report = fit_all_and_rank(simulated(ModelKind::Logistic, 0.1, 5), 1.0, 2,
                                       SelectionLikelihood::Girsanov);
  std::vector<std::size_t> ranks;
  for (auto const& f : report.fits) ranks.push_back(f.rank);
  std::sort(ranks.begin(), ranks.end());
  CHECK(ranks == std::vector<std::size_t>{1, 2, 3});
  for (auto const& f : report.fits) {
    CHECK(f.loglik == f.girsanov_loglik);
    for (auto const& g : report.fits) {
      if (f.rank < g.rank) CHECK(f.aic <= g.aic);
    }
  }
}

TEST_CASE("a model that cannot be fitted ranks last") {
  // Values above 1 are outside the Von Bertalanffy state space.
  ObservationSet obs;
  for (int i = 0; i <= 100; ++i) {
    obs.times.push_back(0.1 * i);
    obs.values.push_back(0.5 + 0.01 * i + 0.003 * ((i * 7) % 5));
  }
  auto const report = fit_all_and_rank(obs, 1.0);
  auto const& vb = report.fit(ModelKind::VonBertalanffy);
  CHECK_FALSE(vb.ok());
  CHECK(std::isinf(vb.aic));
  CHECK(vb.rank == 3);
}

TEST_CASE("likelihood names") {
  CHECK(parse_selection_likelihood("girsanov") == SelectionLikelihood::Girsanov);
  CHECK(parse_selection_likelihood(to_string(SelectionLikelihood::Full)) ==
        SelectionLikelihood::Full);
  CHECK_THROWS_AS(parse_selection_likelihood("bic"), ValidationError);
}

TEST_CASE("pc does not depend on the thread count") {
  auto const truth = ModelSpec::make(ModelKind::Gompertz, 0.6, 0.006);
  auto const grid = TimeGrid::make(0.0, 10.0, 2000);
  RngStream const s(6, 0);
  auto const one = pc_estimate(truth, 12, grid, X0Policy::fixed(0.01), 2, s, Simulator::Milstein, 1);
  auto const four = pc_estimate(truth, 12, grid, X0Policy::fixed(0.01), 2, s, Simulator::Milstein, 4);
  CHECK(one.nc == four.nc);
  CHECK(one.reps == 12);
  REQUIRE(one.records.size() == four.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(one.records[i].winner == four.records[i].winner);
  }
  CHECK(one.pc == static_cast<double>(one.nc) / 12.0);
}

}
