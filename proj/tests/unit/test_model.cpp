#include <doctest.h>

#include <cmath>

#include "growthsde/errors.hpp"
#include "growthsde/model.hpp"
#include "oracles.hpp"

using namespace growthsde;

TEST_SUITE("model") {

TEST_CASE("model names parse and print") {
  for (ModelKind k : kAllModels) CHECK(parse_model_kind(to_string(k)) == k);
  CHECK(parse_model_kind("VB") == ModelKind::VonBertalanffy);
  CHECK(parse_model_kind("Von-Bertalanffy") == ModelKind::VonBertalanffy);
  CHECK_THROWS_AS(parse_model_kind("richards"), ValidationError);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(ModelSpec::make(ModelKind::Gompertz, 0.0, 0.1), ValidationError);
  CHECK_THROWS_AS(ModelSpec::make(ModelKind::Gompertz, 0.6, -0.1), ValidationError);
  CHECK_THROWS_AS(ModelSpec::make(ModelKind::VonBertalanffy, 0.6, 0.1, NAN), ValidationError);
  CHECK_NOTHROW(ModelSpec::make(ModelKind::Logistic, 0.6, 0.1));
}

TEST_CASE("drift and diffusion values") {
  auto const g = ModelSpec::make(ModelKind::Gompertz, 0.6, 0.1);
  CHECK(drift(g, 0.5) == doctest::Approx(-0.6 * 0.5 * std::log(0.5)));
  CHECK(diffusion(g, 0.5) == doctest::Approx(0.05));
  CHECK(drift(g, 1.0) == 0.0);

  auto const vb = ModelSpec::make(ModelKind::VonBertalanffy, 0.6, 0.1, 2.0);
  CHECK(drift(vb, 0.5) == doctest::Approx(0.6 * 1.5));
  CHECK(diffusion(vb, 0.5) == doctest::Approx(0.15));
  CHECK(drift(vb, 2.0) == 0.0);
  CHECK(diffusion(vb, 2.0) == 0.0);
  CHECK_THROWS_AS(drift(vb, 2.5), DomainError);

  auto const lg = ModelSpec::make(ModelKind::Logistic, 0.6, 0.1);
  CHECK(drift(lg, 0.25) == doctest::Approx(0.6 * 0.25 * 0.75));
  CHECK(diffusion(lg, 0.25) == doctest::Approx(0.025));
  CHECK_THROWS_AS(drift(lg, 0.0), DomainError);
  CHECK_THROWS_AS(diffusion(g, -1.0), DomainError);
}

TEST_CASE("diffusion_deriv matches finite differences") {
  for (ModelKind k : kAllModels) {
    auto const spec = ModelSpec::make(k, 0.6, 0.13, 1.0);
    for (double x : {0.05, 0.3, 0.7, 0.95}) {
      double const fd = oracle::central_difference([&](double y) { return diffusion(spec, y); }, x);
      CHECK(std::abs(diffusion_deriv(spec, x) - fd) < 1e-8);
    }
  }
}

TEST_CASE("linear coordinate round trip") {
  for (ModelKind k : kAllModels) {
    auto const spec = ModelSpec::make(k, 0.6, 0.1, 1.5);
    for (double x : {0.01, 0.4, 1.2}) {
      CHECK(from_linear(spec, to_linear(spec, x)) == doctest::Approx(x).epsilon(1e-14));
    }
  }
  CHECK(to_linear(ModelSpec::make(ModelKind::Gompertz, 0.6, 0.1), 0.5) ==
        doctest::Approx(std::log(0.5)));
  CHECK(to_linear(ModelSpec::make(ModelKind::VonBertalanffy, 0.6, 0.1, 1.5), 0.5) ==
        doctest::Approx(1.0));
}

TEST_CASE("analytic means") {
  auto const g = ModelSpec::make(ModelKind::Gompertz, 0.6, 0.1);
  CHECK(analytic_mean_limit(g) == doctest::Approx(0.995842).epsilon(1e-6));
  CHECK(analytic_mean(g, 0.0, 0.3) == doctest::Approx(0.3));
  CHECK(analytic_mean(g, 200.0, 0.3) == doctest::Approx(analytic_mean_limit(g)));

  auto const vb = ModelSpec::make(ModelKind::VonBertalanffy, 0.6, 0.1, 1.0);
  CHECK(analytic_mean(vb, 1.0, 0.2) == doctest::Approx(1.0 - 0.8 * std::exp(-0.6)));
  CHECK(analytic_mean_limit(vb) == 1.0);

  auto const lg = ModelSpec::make(ModelKind::Logistic, 0.6, 0.1);
  CHECK_THROWS_AS(analytic_mean(lg, 1.0, 0.2), UnsupportedModelError);
  CHECK_THROWS_AS(analytic_mean_limit(lg), UnsupportedModelError);
}

TEST_CASE("drift factors through the Girsanov shape") {
  for (ModelKind k : kAllModels) {
    auto const spec = ModelSpec::make(k, 0.7, 0.2, 1.0);
    GirsanovShape const shape(spec);
    for (double x : {0.1, 0.5, 0.9}) {
      CHECK(drift(spec, x) == doctest::Approx(0.7 * shape.f(x)));
      CHECK(diffusion(spec, x) == doctest::Approx(0.2 * shape.g(x)));
    }
  }
}

}
