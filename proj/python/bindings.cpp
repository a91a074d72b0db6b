#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "growthsde/em.hpp"
#include "growthsde/errors.hpp"
#include "growthsde/mle.hpp"
#include "growthsde/one_record.hpp"
#include "growthsde/select.hpp"
#include "growthsde/simulate.hpp"
#include "growthsde/study.hpp"
#include "growthsde/version.hpp"

namespace py = pybind11;
using namespace growthsde;

namespace {

ObservationSet observations(std::vector<double> times, std::vector<double> values) {
  ObservationSet obs;
  obs.times = std::move(times);
  obs.values = std::move(values);
  obs.validate();
  return obs;
}

py::dict path_dict(Path const& p) {
  std::vector<double> t(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) t[i] = p.time(i);
  py::dict d;
  d["t"] = t;
  d["x"] = p.values;
  d["clamp_count"] = p.clamp_count;
  d["fallback_count"] = p.fallback_count;
  return d;
}

ModelSpec spec_of(std::string const& model, double drift, double sigma, double l_inf) {
  return ModelSpec::make(parse_model_kind(model), drift, sigma, l_inf);
}

py::dict simulate_py(std::string const& model, double drift, double sigma, double x0,
                     double t_end, std::size_t steps, std::uint64_t seed,
                     std::optional<std::string> const& simulator, double l_infinity) {
  auto const spec = spec_of(model, drift, sigma, l_infinity);
  Simulator const sim = simulator ? parse_simulator(*simulator) : default_simulator(spec.kind);
  RngStream stream(seed, 0);
  py::gil_scoped_release release;
  Path const p = simulate(sim, spec, x0, TimeGrid::make(0.0, t_end, steps), stream);
  py::gil_scoped_acquire acquire;
  return path_dict(p);
}

py::tuple estimate_py(std::string const& model, std::vector<double> times,
                      std::vector<double> values, double l_infinity) {
  auto const est = estimate_continuous(parse_model_kind(model),
                                       observations(std::move(times), std::move(values)),
                                       l_infinity);
  return py::make_tuple(est.drift, est.sigma);
}

py::dict em_py(std::string const& model, std::vector<double> times, std::vector<double> values,
               std::size_t iterations, std::size_t burn_in, double delta_target,
               std::uint64_t seed, std::optional<std::pair<double, double>> theta0,
               double l_infinity) {
  EmConfig cfg;
  cfg.iterations = iterations;
  cfg.burn_in = burn_in;
  cfg.delta_target = delta_target;
  if (theta0) cfg.theta0 = Theta{theta0->first, theta0->second};
  auto const obs = observations(std::move(times), std::move(values));
  EmTrace trace;
  {
    py::gil_scoped_release release;
    trace = run_em(parse_model_kind(model), obs, l_infinity, cfg, RngStream(seed, 0));
  }
  py::dict d;
  d["drift"] = trace.drift;
  d["sigma"] = trace.sigma;
  d["drift_ml"] = trace.drift_ml;
  d["sigma_ml"] = trace.sigma_ml;
  d["theta0"] = py::make_tuple(trace.theta0.drift, trace.theta0.sigma);
  d["sweep_resamples"] = trace.sweep_resamples;
  d["bridge_fallbacks"] = trace.bridge_fallbacks;
  return d;
}

py::dict select_py(std::vector<double> times, std::vector<double> values, double l_infinity,
                   int k, std::string const& likelihood) {
  auto const report = fit_all_and_rank(observations(std::move(times), std::move(values)),
                                       l_infinity, k, parse_selection_likelihood(likelihood));
  py::list fits;
  for (auto const& f : report.fits) {
    py::dict d;
    d["model"] = std::string(to_string(f.kind));
    d["drift_hat"] = f.drift_hat;
    d["sigma_hat"] = f.sigma_hat;
    d["loglik"] = f.loglik;
    d["aic"] = f.aic;
    d["rank"] = f.rank;
    d["failure"] = f.failure;
    fits.append(d);
  }
  py::dict out;
  out["winner"] = std::string(to_string(report.winner));
  out["fits"] = fits;
  return out;
}

py::dict pc_py(std::string const& model, double drift, double sigma, std::size_t reps,
               double t_end, std::size_t steps, double x0, int k, std::uint64_t seed,
               double l_infinity) {
  auto const spec = spec_of(model, drift, sigma, l_infinity);
  PcResult res;
  {
    py::gil_scoped_release release;
    res = pc_estimate(spec, reps, TimeGrid::make(0.0, t_end, steps), X0Policy::fixed(x0), k,
                      RngStream(seed, 0));
  }
  py::dict d;
  d["pc"] = res.pc;
  d["nc"] = res.nc;
  d["reps"] = res.reps;
  return d;
}

py::dict one_record_py(std::string const& model, double drift, double sigma,
                       std::size_t individuals, double t_end, std::size_t steps,
                       double beta_a, double beta_b, std::size_t stride, std::uint64_t seed,
                       double l_infinity) {
  auto const spec = spec_of(model, drift, sigma, l_infinity);
  Path p;
  {
    py::gil_scoped_release release;
    p = one_record_study(spec, individuals, TimeGrid::make(0.0, t_end, steps), beta_a, beta_b,
                         stride, RngStream(seed, 0));
  }
  return path_dict(p);
}

py::dict run_study_py(std::string const& config_json, bool write) {
  auto const cfg = StudyConfig::from_json_text(config_json);
  StudyOutcome out;
  {
    py::gil_scoped_release release;
    out = run_study(cfg, write);
  }
  py::dict files;
  for (auto const& [name, text] : out.outputs) files[py::str(name)] = text;
  py::dict d;
  d["replications"] = out.replications;
  d["failures"] = out.failures;
  d["outputs"] = files;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Growth-curve SDE simulation, estimation and model selection";
  m.attr("__version__") = kVersion;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (ValidationError const& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (UnsupportedModelError const& e) {
      PyErr_SetString(PyExc_NotImplementedError, e.what());
    } catch (DomainError const& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  using namespace py::literals;
  m.def("simulate", &simulate_py, "model"_a, "drift"_a, "sigma"_a, "x0"_a, "t_end"_a,
        "steps"_a, "seed"_a = 0, "simulator"_a = py::none(), "l_infinity"_a = 1.0,
        "Simulate one path on a uniform grid from 0 to t_end. Returns t, x and counters.");
  m.def("estimate", &estimate_py, "model"_a, "times"_a, "values"_a, "l_infinity"_a = 1.0,
        "Closed-form (drift, sigma) from densely observed values.");
  m.def("em", &em_py, "model"_a, "times"_a, "values"_a, "iterations"_a = 100, "burn_in"_a = 50,
        "delta_target"_a = 0.01, "seed"_a = 0, "theta0"_a = py::none(), "l_infinity"_a = 1.0);
  m.def("select", &select_py, "times"_a, "values"_a, "l_infinity"_a = 1.0, "k"_a = 2,
        "likelihood"_a = "full", "Fit all three models and rank them by AIC.");
  m.def("pc", &pc_py, "model"_a, "drift"_a, "sigma"_a, "reps"_a, "t_end"_a = 10.0,
        "steps"_a = 10000, "x0"_a = 0.01, "k"_a = 2, "seed"_a = 0, "l_infinity"_a = 1.0);
  m.def("one_record", &one_record_py, "model"_a, "drift"_a, "sigma"_a, "individuals"_a = 100,
        "t_end"_a = 10.0, "steps"_a = 10000, "beta_a"_a = 1.0, "beta_b"_a = 100.0,
        "stride"_a = 10, "seed"_a = 0, "l_infinity"_a = 1.0);
  m.def("run_study", &run_study_py, "config_json"_a, "write"_a = false,
        "Run a study from its JSON config text; returns the CSV outputs by file name.");
}
