#include <doctest.h>

#include <vector>

#include "growthsde/em.hpp"
#include "growthsde/errors.hpp"
#include "growthsde/mle.hpp"
#include "growthsde/simulate.hpp"

using namespace growthsde;

namespace {

ObservationSet sparse(ModelKind k, std::uint64_t seed, double x0 = 0.001) {
  auto const spec = ModelSpec::make(k, 0.6, 0.1);
  RngStream s(seed, 0);
  auto const path = simulate(default_simulator(k), spec, x0, TimeGrid::make(0.0, 100.0, 10000), s);
  return subsample(path, 100);
}

}  // namespace

TEST_SUITE("em") {

TEST_CASE("burn-in average keeps the last K - K0 iterates") {
  std::vector<double> trace{10, 10, 1, 2, 3, 4};
  CHECK(burn_in_average(trace, 2) == doctest::Approx(2.5));
  CHECK(burn_in_average(trace, 5) == 4.0);
  CHECK_THROWS_AS(burn_in_average(trace, 6), ValidationError);
  std::vector<double> flat(50, 0.1);
  CHECK(burn_in_average(flat, 25) == 0.1);
}

TEST_CASE("config validation") {
  EmConfig cfg;
  cfg.burn_in = 100;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.delta_target = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.theta0 = Theta{0.5, -1.0};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("without missing data every iterate is the closed-form estimate") {
  for (ModelKind k : kAllModels) {
    CAPTURE(to_string(k));
    auto const obs = sparse(k, 31);
    auto const direct = estimate_continuous(k, obs, 1.0);
    EmConfig cfg;
    cfg.iterations = 6;
    cfg.burn_in = 3;
    cfg.delta_target = 1.0;  // equals the observation gap: one sub-step each
    cfg.theta0 = Theta{0.5, 0.2};
    auto const trace = run_em(k, obs, 1.0, cfg, RngStream(1, 0));
    REQUIRE(trace.drift.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(trace.drift[i] == direct.drift);
      CHECK(trace.sigma[i] == direct.sigma);
    }
    CHECK(trace.drift_ml == direct.drift);
    CHECK(trace.sigma_ml == direct.sigma);
  }
}

TEST_CASE("default theta0 is the closed-form estimate on the observations") {
  auto const obs = sparse(ModelKind::VonBertalanffy, 32);
  EmConfig cfg;
  cfg.iterations = 4;
  cfg.burn_in = 2;
  auto const trace = em_vonbert(obs, 1.0, cfg, RngStream(2, 0));
  auto const direct = vonbert_mle(obs, 1.0);
  CHECK(trace.theta0.drift == direct.drift);
  CHECK(trace.theta0.sigma == direct.sigma);
}

TEST_CASE("EM is deterministic and recovers the parameters") {
  EmConfig cfg;
  cfg.iterations = 40;
  cfg.burn_in = 20;
  auto const obs = sparse(ModelKind::Gompertz, 33);
  auto const a = em_gompertz(obs, cfg, RngStream(3, 0));
  auto const b = em_gompertz(obs, cfg, RngStream(3, 0));
  CHECK(a.drift == b.drift);
  CHECK(a.sigma == b.sigma);
  CHECK(a.drift_ml == doctest::Approx(0.6).epsilon(0.25));
  CHECK(a.sigma_ml == doctest::Approx(0.1).epsilon(0.25));
}

TEST_CASE("logistic EM runs through the crossing bridge") {
  EmConfig cfg;
  cfg.iterations = 10;
  cfg.burn_in = 5;
  auto const obs = sparse(ModelKind::Logistic, 34, 0.5);
  auto const t = em_logistic(obs, cfg, RngStream(4, 0));
  CHECK(t.drift.size() == 10);
  CHECK(t.drift_ml == doctest::Approx(0.6).epsilon(0.3));
  CHECK(t.sigma_ml == doctest::Approx(0.1).epsilon(0.3));
}

}
