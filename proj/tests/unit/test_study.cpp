#include <doctest.h>

#include <algorithm>
#include <string>

#include "growthsde/errors.hpp"
#include "growthsde/mle.hpp"
#include "growthsde/study.hpp"

using namespace growthsde;

namespace {

std::string const kSmall = R"({
  "study": "continuous",
  "model": {"model": "gompertz", "drift": 0.6, "sigma": 0.1},
  "initial": {"x0": 0.01},
  "grid": {"t_end": 10, "steps": 1000},
  "replications": 6,
  "seed": 5,
  "output_dir": "unused"
})";

StudyConfig small(std::string const& kind) {
  auto doc = nlohmann::json::parse(kSmall);
  doc["study"] = kind;
  doc.erase("model");
  doc["models"] = nlohmann::json::array({
      {{"model", "gompertz"}, {"drift", 0.6}, {"sigma", 0.1}},
      {{"model", "vonbertalanffy"}, {"drift", 0.6}, {"sigma", 0.1}},
      {{"model", "logistic"}, {"drift", 0.6}, {"sigma", 0.1}},
  });
  if (kind == "discrete-em") {
    doc["stride"] = 50;
    doc["em"] = {{"iterations", 6}, {"burn_in", 3}, {"delta_target", 0.05}, {"trace_reps", 2}};
  }
  if (kind == "one-record") {
    doc["initial"] = {{"beta", {{"alpha", 1}, {"beta", 100}}}};
    doc["stride"] = 10;
    doc["one_record"] = {{"individuals", 10}};
    doc["em"] = {{"iterations", 4}, {"burn_in", 2}, {"delta_target", 0.01}};
    doc["replications"] = 2;
  }
  if (kind == "consistency") doc["consistency"] = {{"checkpoint_stride", 250}};
  return StudyConfig::from_json(doc);
}

}  // namespace

TEST_SUITE("study") {

TEST_CASE("config errors name the offending field") {
  auto doc = nlohmann::json::parse(kSmall);
  doc["grid"]["steps"] = -3;
  CHECK_THROWS_WITH_AS(StudyConfig::from_json(doc), doctest::Contains("grid.steps"),
                       ValidationError);
  doc = nlohmann::json::parse(kSmall);
  doc["model"]["sigmaa"] = 0.1;
  CHECK_THROWS_WITH_AS(StudyConfig::from_json(doc), doctest::Contains("model.sigmaa"),
                       ValidationError);
  doc = nlohmann::json::parse(kSmall);
  doc["study"] = "tables";
  CHECK_THROWS_AS(StudyConfig::from_json(doc), ValidationError);
  CHECK_THROWS_AS(StudyConfig::from_json_text("{not json"), ValidationError);
}

TEST_CASE("to_json round trips") {
  for (std::string kind : {"continuous", "discrete-em", "one-record", "selection", "pc",
                           "consistency"}) {
    auto const c = small(kind);
    auto const again = StudyConfig::from_json(c.to_json());
    CHECK(again.to_json() == c.to_json());
  }
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("outputs do not depend on the thread count") {
  for (std::string kind : {"continuous", "discrete-em", "one-record", "selection", "pc",
                           "consistency"}) {
    CAPTURE(kind);
    auto c = small(kind);
    c.threads = 1;
    auto const a = run_study(c, false);
    c.threads = 3;
    auto const b = run_study(c, false);
    CHECK(a.failures == 0);
    REQUIRE(a.outputs.size() == b.outputs.size());
    for (std::size_t i = 0; i < a.outputs.size(); ++i) {
      CHECK(a.outputs[i].first == b.outputs[i].first);
      CHECK(a.outputs[i].second == b.outputs[i].second);
    }
  }
}

TEST_CASE("continuous study writes replication rows and a summary") {
  auto const out = run_study(small("continuous"), false);
  CHECK(out.replications == 18);
  bool summary = false;
  for (auto const& [name, text] : out.outputs) {
    if (name == "summary.csv") {
      summary = true;
      CHECK(text.rfind("model,parameter,true_value,mean,q_low,q_high,n\n", 0) == 0);
    }
    if (name == "gompertz_replications.csv") {
      CHECK(text.rfind("rep,drift_hat,sigma_hat,status\n", 0) == 0);
      CHECK(std::count(text.begin(), text.end(), '\n') == 7);
    }
  }
  CHECK(summary);
}

TEST_CASE("summary statistics") {
  std::vector<double> xs{1, 2, 3, 4};
  auto const row = summarize("b", 2.0, xs);
  CHECK(row.mean == 2.5);
  CHECK(row.n == 4);
  CHECK(row.q_low == doctest::Approx(1.075));
  CHECK(row.q_high == doctest::Approx(3.925));
}

TEST_CASE("consistency sweep") {
  auto const spec = ModelSpec::make(ModelKind::Gompertz, 0.6, 0.1);
  auto const grid = TimeGrid::make(0.0, 10.0, 10000);
  RngStream const s(9, 0);
  auto const rows = consistency_sweep(spec, grid, 100, s, 0.001, Simulator::Exact);
  CHECK(rows.size() == 100);
  CHECK(rows.back().t == doctest::Approx(10.0));
  auto const whole = consistency_sweep(spec, grid, 10000, s, 0.001, Simulator::Exact);
  REQUIRE(whole.size() == 1);
  RngStream path_stream = s;
  auto const path = simulate(Simulator::Exact, spec, 0.001, grid, path_stream);
  auto const est = estimate_continuous(ModelKind::Gompertz, path);
  CHECK(*whole[0].drift_hat == est.drift);
  CHECK(*whole[0].sigma_hat == est.sigma);
  CHECK(*rows.back().drift_hat == est.drift);
  CHECK_THROWS_AS(consistency_sweep(spec, grid, 300, s, 0.001, Simulator::Exact), ValidationError);
}

}
