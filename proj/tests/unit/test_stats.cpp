#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "growthsde/errors.hpp"
#include "growthsde/stats.hpp"

using namespace growthsde;

TEST_SUITE("stats") {

TEST_CASE("type-7 central interval of 1..100") {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  auto const [lo, hi] = quantiles(xs, 0.95);
  CHECK(lo == doctest::Approx(3.475));
  CHECK(hi == doctest::Approx(97.525));
  CHECK(quantile(xs, 0.5) == doctest::Approx(50.5));
  CHECK(quantile(xs, 0.0) == 1.0);
  CHECK(quantile(xs, 1.0) == 100.0);
}

TEST_CASE("quantiles do not depend on input order") {
  std::vector<double> xs{5, 1, 4, 2, 3};
  CHECK(quantile(xs, 0.25) == doctest::Approx(2.0));
}

TEST_CASE("coverage must be in the open interval") {
  std::vector<double> xs{1, 2, 3};
  CHECK_THROWS(quantiles(xs, 1.0));
  CHECK_THROWS(quantiles(xs, 0.0));
  std::vector<double> one{1};
  CHECK_THROWS(quantiles(one, 0.5));
}

TEST_CASE("mean and sample sd") {
  std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(mean(xs) == doctest::Approx(5.0));
  CHECK(stddev(xs) == doctest::Approx(std::sqrt(32.0 / 7.0)));
}

}
