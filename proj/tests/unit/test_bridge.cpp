#include <doctest.h>

#include <cmath>
#include <vector>

#include "growthsde/bridge.hpp"
#include "growthsde/errors.hpp"
#include "growthsde/simulate.hpp"
#include "oracles.hpp"

using namespace growthsde;

namespace {

template <class Bridge>
std::vector<double> bridge_midpoints(Bridge const& draw, BridgeRequest const& req,
                                     std::size_t count, std::uint64_t seed) {
  RngStream const root(seed, 0);
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    RngStream s = root.child(i);
    out.push_back(draw(req, s).values[req.substeps / 2]);
  }
  return out;
}

}  // namespace

TEST_SUITE("bridge") {

TEST_CASE("bridges pin both endpoints") {
  BridgeRequest req{-0.5, 1.0, -0.3, 2.0, 10};
  RngStream s(1, 0);
  auto const ou = ou_bridge(0.6, 0.3, req, s);
  REQUIRE(ou.values.size() == 11);
  CHECK(ou.values.front() == -0.5);
  CHECK(ou.values.back() == -0.3);
  CHECK(ou.times.front() == 1.0);
  CHECK(ou.times.back() == 2.0);
  auto const bm = bm_bridge(0.3, req, s);
  CHECK(bm.values.front() == -0.5);
  CHECK(bm.values.back() == -0.3);
  auto const spec = ModelSpec::make(ModelKind::Logistic, 0.6, 0.1);
  BridgeRequest preq{0.9, 0.0, 0.95, 1.0, 100};
  auto const bs = bs_bridge(spec, preq, s);
  CHECK(bs.values.front() == 0.9);
  CHECK(bs.values.back() == 0.95);
  CHECK(bs.attempts_used >= 1);
  for (double x : bs.values) CHECK(x > 0.0);
}

TEST_CASE("single-step requests return the endpoints") {
  RngStream s(2, 0);
  auto const spec = ModelSpec::make(ModelKind::Logistic, 0.6, 0.1);
  auto const bs = bs_bridge(spec, {0.2, 0.0, 0.3, 1.0, 1}, s);
  CHECK(bs.values == std::vector<double>{0.2, 0.3});
  CHECK_THROWS_AS(bm_bridge(0.1, {0.0, 1.0, 0.0, 1.0, 3}, s), ValidationError);
  CHECK_THROWS_AS(bm_bridge(0.1, {0.0, 0.0, 0.0, 1.0, 0}, s), ValidationError);
}

TEST_CASE("OU bridge midpoint matches rejection conditioning") {
  double const b = 0.6, sigma = 0.3, a = -0.5, end = -0.3;
  BridgeRequest const req{a, 0.0, end, 1.0, 2};
  std::size_t const n = 5000;
  auto const ours = bridge_midpoints(
      [&](BridgeRequest const& r, RngStream& s) { return ou_bridge(b, sigma, r, s); }, req, n, 41);
  oracle::Sampler rng(4242);
  auto const ref = oracle::rejection_midpoints(
      rng, [&](oracle::Sampler& g, double y) { return oracle::ou_step(g, y, b, sigma, 0.5); }, a,
      end, 2, 1, 2e-3, n, 10'000'000);
  REQUIRE(ref.size() == n);
  CHECK(oracle::ks_statistic(ours, ref) < oracle::ks_critical(0.01, n, n));
}

TEST_CASE("Brownian bridge midpoint matches rejection conditioning with any drift") {
  double const sigma = 0.25, a = 0.0, end = 0.1;
  BridgeRequest const req{a, 0.0, end, 1.0, 4};
  std::size_t const n = 2000;
  auto const ours = bridge_midpoints(
      [&](BridgeRequest const& r, RngStream& s) { return bm_bridge(sigma, r, s); }, req, n, 43);
  oracle::Sampler rng(4343);
  auto const ref = oracle::rejection_midpoints(
      rng,
      [&](oracle::Sampler& g, double y) { return y - 0.4 * 0.25 + sigma * 0.5 * g.normal(); },
      a, end, 4, 2, 2e-3, n, 10'000'000);
  REQUIRE(ref.size() == n);
  CHECK(oracle::ks_statistic(ours, ref) < oracle::ks_critical(0.01, n, n));
}

TEST_CASE("crossing bridge midpoint matches rejection conditioning near stationarity") {
  double const r = 0.6, sigma = 0.1, a = 0.9, end = 0.95;
  auto const spec = ModelSpec::make(ModelKind::Logistic, r, sigma);
  BridgeRequest const req{a, 0.0, end, 1.0, 100};
  std::size_t const n = 1000;
  auto const ours = bridge_midpoints(
      [&](BridgeRequest const& q, RngStream& s) { return bs_bridge(spec, q, s); }, req, n, 47);
  oracle::LinearNoiseSde const sde{[&](double x) { return r * x * (1 - x); },
                                   [&](double x) { return sigma * x; }, sigma};
  oracle::Sampler rng(4747);
  auto const ref = oracle::rejection_midpoints(
      rng, [&](oracle::Sampler& g, double x) { return sde.step(g, x, 0.01); }, a, end, 100, 50,
      1e-3, n, 10'000'000);
  REQUIRE(ref.size() == n);
  CHECK(oracle::ks_statistic(ours, ref) < oracle::ks_critical(0.001, n, n));
}

TEST_CASE("crossing bridge gives up with NoCrossingError") {
  // Far-apart endpoints with tiny noise cannot meet.
  auto const spec = ModelSpec::make(ModelKind::Logistic, 0.6, 1e-4);
  RngStream s(5, 0);
  CHECK_THROWS_AS(bs_bridge(spec, {0.1, 0.0, 0.9, 1.0, 50}, s, 5), NoCrossingError);
}

TEST_CASE("impute fills every gap and hits the observations") {
  auto const grid = TimeGrid::make(0.0, 10.0, 1000);
  for (ModelKind k : kAllModels) {
    CAPTURE(to_string(k));
    auto const spec = ModelSpec::make(k, 0.6, 0.1);
    RngStream s(6, 0);
    auto const obs = subsample(simulate(default_simulator(k), spec, 0.3, grid, s), 100);
    REQUIRE(obs.size() == 11);
    RngStream a(8, 1), b(8, 1);
    auto const fine = impute(spec, obs, 0.01, a);
    CHECK(fine.size() == 1001);
    CHECK(fine.grid.step() == doctest::Approx(0.01));
    for (std::size_t i = 0; i < obs.size(); ++i) CHECK(fine.values[i * 100] == obs.values[i]);
    CHECK(impute(spec, obs, 0.01, b).values == fine.values);
    CHECK(fine.linear.has_value() == (k != ModelKind::Logistic));
  }
}

TEST_CASE("impute with delta above the gap is the identity") {
  auto const spec = ModelSpec::make(ModelKind::Gompertz, 0.6, 0.1);
  ObservationSet obs;
  obs.times = {0, 1, 2, 3};
  obs.values = {0.2, 0.4, 0.5, 0.7};
  RngStream s(1, 1);
  auto const fine = impute(spec, obs, 5.0, s);
  CHECK(fine.values == obs.values);
  obs.times[2] = 2.5;
  CHECK_THROWS_AS(impute(spec, obs, 0.1, s), ValidationError);
}

}
