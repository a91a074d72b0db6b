#include "growthsde/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <initializer_list>
#include <sstream>

#include "growthsde/csv_io.hpp"
#include "growthsde/errors.hpp"
#include "growthsde/mle.hpp"
#include "growthsde/parallel.hpp"
#include "growthsde/stats.hpp"
#include "growthsde/version.hpp"

namespace growthsde {

using nlohmann::json;

namespace {

// ---- config parsing --------------------------------------------------------

[[noreturn]] void bad(std::string const& field, std::string const& what) {
  throw ValidationError(field + ": " + what);
}

std::string join(std::string const& prefix, std::string const& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_object(json const& j, std::string const& field,
                  std::initializer_list<char const*> allowed) {
  if (!j.is_object()) bad(field.empty() ? "config" : field, "must be an object");
  for (auto const& [key, _] : j.items()) {
    bool const known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](char const* a) { return key == a; });
    if (!known) bad(join(field, key), "unknown field");
  }
}

double real_field(json const& j, std::string const& prefix, char const* key,
                  std::optional<double> fallback, bool positive) {
  std::string const field = join(prefix, key);
  if (!j.contains(key)) {
    if (!fallback) bad(field, "required");
    return *fallback;
  }
  auto const& v = j.at(key);
  if (!v.is_number()) bad(field, "must be a number");
  double const x = v.get<double>();
  if (!std::isfinite(x)) bad(field, "must be finite");
  if (positive && !(x > 0.0)) bad(field, "must be > 0");
  return x;
}

std::uint64_t count_field(json const& j, std::string const& prefix,
                          char const* key, std::optional<std::uint64_t> fallback,
                          std::uint64_t minimum) {
  std::string const field = join(prefix, key);
  if (!j.contains(key)) {
    if (!fallback) bad(field, "required");
    return *fallback;
  }
  auto const& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    bad(field, "must be a non-negative integer");
  }
  auto const x = v.get<std::uint64_t>();
  if (x < minimum) bad(field, "must be >= " + std::to_string(minimum));
  return x;
}

std::string string_field(json const& j, std::string const& prefix,
                         char const* key, std::optional<std::string> fallback) {
  std::string const field = join(prefix, key);
  if (!j.contains(key)) {
    if (!fallback) bad(field, "required");
    return *fallback;
  }
  if (!j.at(key).is_string()) bad(field, "must be a string");
  return j.at(key).get<std::string>();
}

template <class Parse>
auto enum_field(json const& j, std::string const& prefix, char const* key,
                Parse parse) {
  std::string const value = string_field(j, prefix, key, std::nullopt);
  try {
    return parse(value);
  } catch (std::exception const& e) {
    bad(join(prefix, key), e.what());
  }
}

Theta theta_field(json const& j, std::string const& field) {
  check_object(j, field, {"drift", "sigma"});
  return {real_field(j, field, "drift", std::nullopt, true),
          real_field(j, field, "sigma", std::nullopt, true)};
}

StudyModel model_field(json const& j, std::string const& field) {
  check_object(j, field, {"model", "drift", "sigma", "l_infinity", "theta0"});
  StudyModel m;
  m.spec.kind = enum_field(j, field, "model", parse_model_kind);
  m.spec.drift = real_field(j, field, "drift", std::nullopt, true);
  m.spec.sigma = real_field(j, field, "sigma", std::nullopt, true);
  m.spec.l_infinity = real_field(j, field, "l_infinity", 1.0, true);
  if (j.contains("theta0")) m.theta0 = theta_field(j.at("theta0"), join(field, "theta0"));
  return m;
}

json theta_json(Theta const& t) { return {{"drift", t.drift}, {"sigma", t.sigma}}; }

// ---- output helpers ----------------------------------------------------------

std::string drift_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Gompertz:
      return "b";
    case ModelKind::VonBertalanffy:
      return "kappa";
    case ModelKind::Logistic:
      return "r";
  }
  return "drift";
}

std::string status_text(std::string const& failure) {
  if (failure.empty()) return "ok";
  std::string s = failure;
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '"', '\'');
  return s;
}

std::string optional_number(std::optional<double> x) {
  return x ? format_double(*x) : std::string();
}

void summary_rows(std::ostringstream& out, ModelSpec const& spec,
                  std::vector<double> const& drift, std::vector<double> const& sigma) {
  auto row = [&](SummaryRow const& s) {
    out << to_string(spec.kind) << ',' << s.parameter << ','
        << format_double(s.true_value) << ',' << format_double(s.mean) << ','
        << format_double(s.q_low) << ',' << format_double(s.q_high) << ',' << s.n
        << '\n';
  };
  auto const describe = [](std::string param, double truth, std::vector<double> const& xs) {
    if (xs.size() >= 2) return summarize(std::move(param), truth, xs);
    double const nan = std::nan("");
    return SummaryRow{std::move(param), truth, xs.empty() ? nan : xs[0], nan, nan, xs.size()};
  };
  row(describe(drift_name(spec.kind), spec.drift, drift));
  row(describe("sigma", spec.sigma, sigma));
}

struct RepResult {
  double drift = std::nan("");
  double sigma = std::nan("");
  std::size_t extra = 0;
  std::size_t extra2 = 0;
  std::string failure;
  std::optional<EmTrace> trace;
  std::vector<ConsistencyRow> sweep;
  std::optional<SelectionReport> report;
};

}  // namespace

// ---- public helpers ----------------------------------------------------------

std::string_view to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::Continuous:
      return "continuous";
    case StudyKind::DiscreteEm:
      return "discrete-em";
    case StudyKind::OneRecord:
      return "one-record";
    case StudyKind::Selection:
      return "selection";
    case StudyKind::Pc:
      return "pc";
    case StudyKind::Consistency:
      return "consistency";
  }
  return "unknown";
}

StudyKind parse_study_kind(std::string_view name) {
  for (auto kind : {StudyKind::Continuous, StudyKind::DiscreteEm, StudyKind::OneRecord,
                    StudyKind::Selection, StudyKind::Pc, StudyKind::Consistency}) {
    if (name == to_string(kind)) return kind;
  }
  throw ValidationError("unknown study kind '" + std::string(name) +
                        "' (continuous, discrete-em, one-record, selection, pc, "
                        "consistency)");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SummaryRow summarize(std::string parameter, double true_value,
                     std::vector<double> const& samples, double coverage) {
  auto const [lo, hi] = quantiles(samples, coverage);
  return {std::move(parameter), true_value, mean(samples), lo, hi, samples.size()};
}

StudyConfig StudyConfig::from_json_text(std::string const& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (json::parse_error const& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  return from_json(doc);
}

StudyConfig StudyConfig::from_json(json const& doc) {
  check_object(doc, "", {"study", "model", "models", "initial", "grid", "simulator",
                         "stride", "em", "one_record", "selection", "consistency",
                         "replications", "seed", "output_dir", "threads"});
  StudyConfig c;
  c.kind = enum_field(doc, "", "study", parse_study_kind);

  if (doc.contains("model") == doc.contains("models")) {
    bad("models", "give exactly one of 'model' or 'models'");
  }
  if (doc.contains("model")) {
    c.models.push_back(model_field(doc.at("model"), "model"));
  } else {
    auto const& arr = doc.at("models");
    if (!arr.is_array() || arr.empty()) bad("models", "must be a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      c.models.push_back(model_field(arr[i], "models[" + std::to_string(i) + "]"));
    }
  }

  if (doc.contains("initial")) {
    auto const& ini = doc.at("initial");
    check_object(ini, "initial", {"x0", "beta"});
    if (ini.contains("x0") == ini.contains("beta")) {
      bad("initial", "give exactly one of 'x0' or 'beta'");
    }
    if (ini.contains("x0")) {
      c.initial = X0Policy::fixed(real_field(ini, "initial", "x0", std::nullopt, false));
    } else {
      auto const& beta = ini.at("beta");
      check_object(beta, "initial.beta", {"alpha", "beta"});
      c.initial = X0Policy::beta(real_field(beta, "initial.beta", "alpha", std::nullopt, true),
                                 real_field(beta, "initial.beta", "beta", std::nullopt, true));
    }
  } else if (c.kind == StudyKind::OneRecord) {
    c.initial = X0Policy::beta(1.0, 100.0);
  }
  if (c.kind == StudyKind::OneRecord && c.initial.kind != X0Policy::Kind::Beta) {
    bad("initial", "a one-record study needs a beta initial distribution");
  }

  if (!doc.contains("grid")) bad("grid", "required");
  auto const& g = doc.at("grid");
  check_object(g, "grid", {"t0", "t_end", "steps"});
  c.grid.t0 = real_field(g, "grid", "t0", 0.0, false);
  c.grid.t_end = real_field(g, "grid", "t_end", std::nullopt, false);
  c.grid.n = count_field(g, "grid", "steps", std::nullopt, 1);
  if (!(c.grid.t_end > c.grid.t0)) bad("grid.t_end", "must exceed grid.t0");

  if (doc.contains("simulator")) {
    c.simulator = enum_field(doc, "", "simulator", parse_simulator);
  }
  c.stride = count_field(doc, "", "stride", 1, 1);
  if (c.grid.n % c.stride != 0) bad("stride", "must divide grid.steps");

  if (doc.contains("em")) {
    auto const& em = doc.at("em");
    check_object(em, "em", {"iterations", "burn_in", "delta_target", "theta0", "trace_reps"});
    c.em.iterations = count_field(em, "em", "iterations", 100, 2);
    c.em.burn_in = count_field(em, "em", "burn_in", c.em.iterations / 2, 0);
    if (c.em.burn_in >= c.em.iterations) bad("em.burn_in", "must be < em.iterations");
    c.em.delta_target = real_field(em, "em", "delta_target", 0.01, true);
    if (em.contains("theta0")) c.em.theta0 = theta_field(em.at("theta0"), "em.theta0");
    c.trace_reps = count_field(em, "em", "trace_reps", 1, 0);
  }

  if (doc.contains("one_record")) {
    auto const& orc = doc.at("one_record");
    check_object(orc, "one_record", {"individuals", "policy", "resample_limit"});
    c.individuals = count_field(orc, "one_record", "individuals", 100, 2);
    if (orc.contains("policy")) {
      c.composite.policy = enum_field(orc, "one_record", "policy", parse_empty_set_policy);
    }
    c.composite.resample_limit = count_field(orc, "one_record", "resample_limit", 100, 0);
  }

  if (doc.contains("selection")) {
    auto const& sel = doc.at("selection");
    check_object(sel, "selection", {"k", "likelihood"});
    c.k = static_cast<int>(count_field(sel, "selection", "k", 2, 0));
    if (sel.contains("likelihood")) {
      c.likelihood = enum_field(sel, "selection", "likelihood", parse_selection_likelihood);
    }
  }

  if (doc.contains("consistency")) {
    auto const& con = doc.at("consistency");
    check_object(con, "consistency", {"checkpoint_stride"});
    c.checkpoint_stride = count_field(con, "consistency", "checkpoint_stride", 100, 1);
  }
  if (c.kind == StudyKind::Consistency && c.grid.n % c.checkpoint_stride != 0) {
    bad("consistency.checkpoint_stride", "must divide grid.steps");
  }

  c.replications = count_field(doc, "", "replications", 1, 1);
  c.seed = count_field(doc, "", "seed", 0, 0);
  c.output_dir = string_field(doc, "", "output_dir", std::string("."));
  c.threads = static_cast<unsigned>(count_field(doc, "", "threads", 0, 0));

  for (std::size_t i = 0; i < c.models.size(); ++i) {
    auto const& spec = c.models[i].spec;
    std::string const field = "models[" + std::to_string(i) + "]";
    if (c.kind != StudyKind::OneRecord && c.initial.kind == X0Policy::Kind::Fixed &&
        !in_interior(spec, c.initial.x0)) {
      bad("initial.x0", "outside the state space of " + std::string(to_string(spec.kind)));
    }
    Simulator const sim = c.simulator_for(spec.kind);
    if (sim == Simulator::Exact && spec.kind == ModelKind::Logistic) {
      bad("simulator", "no exact transition for the logistic model");
    }
    if (sim == Simulator::Solution && spec.kind != ModelKind::Logistic) {
      bad("simulator", "the strong-solution simulator is logistic only");
    }
    (void)field;
  }
  return c;
}

Simulator StudyConfig::simulator_for(ModelKind kind) const {
  if (simulator) return *simulator;
  if (this->kind == StudyKind::OneRecord || this->kind == StudyKind::Pc) {
    return Simulator::Milstein;
  }
  return default_simulator(kind);
}

json StudyConfig::to_json() const {
  json models_json = json::array();
  for (auto const& m : models) {
    json mj = {{"model", std::string(to_string(m.spec.kind))},
               {"drift", m.spec.drift},
               {"sigma", m.spec.sigma},
               {"l_infinity", m.spec.l_infinity}};
    if (m.theta0) mj["theta0"] = theta_json(*m.theta0);
    models_json.push_back(mj);
  }
  json initial_json;
  if (initial.kind == X0Policy::Kind::Fixed) {
    initial_json = {{"x0", initial.x0}};
  } else {
    initial_json = {{"beta", {{"alpha", initial.beta_a}, {"beta", initial.beta_b}}}};
  }
  json em_json = {{"iterations", em.iterations},
                  {"burn_in", em.burn_in},
                  {"delta_target", em.delta_target},
                  {"trace_reps", trace_reps}};
  if (em.theta0) em_json["theta0"] = theta_json(*em.theta0);
  json doc = {
      {"study", std::string(to_string(kind))},
      {"models", models_json},
      {"initial", initial_json},
      {"grid", {{"t0", grid.t0}, {"t_end", grid.t_end}, {"steps", grid.n}}},
      {"stride", stride},
      {"em", em_json},
      {"one_record",
       {{"individuals", individuals},
        {"policy", std::string(to_string(composite.policy))},
        {"resample_limit", composite.resample_limit}}},
      {"selection", {{"k", k}, {"likelihood", std::string(to_string(likelihood))}}},
      {"consistency", {{"checkpoint_stride", checkpoint_stride}}},
      {"replications", replications},
      {"seed", seed},
      {"output_dir", output_dir},
      {"threads", threads},
  };
  if (simulator) doc["simulator"] = std::string(to_string(*simulator));
  return doc;
}

std::vector<ConsistencyRow> consistency_sweep(ModelSpec const& spec,
                                              TimeGrid const& grid,
                                              std::size_t checkpoint_stride,
                                              RngStream const& stream, double x0,
                                              Simulator sim) {
  grid.validate();
  if (checkpoint_stride < 1 || grid.n % checkpoint_stride != 0) {
    throw ValidationError("consistency sweep: checkpoint stride must divide the grid");
  }
  RngStream s = stream;
  Path const path = simulate(sim, spec, x0, grid, s);
  ObservationSet const full = to_observations(path);
  std::vector<ConsistencyRow> rows;
  for (std::size_t end = checkpoint_stride; end <= grid.n; end += checkpoint_stride) {
    ObservationSet prefix;
    prefix.times.assign(full.times.begin(), full.times.begin() + static_cast<std::ptrdiff_t>(end + 1));
    prefix.values.assign(full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(end + 1));
    if (full.linear) {
      LinearChannel ch = *full.linear;
      ch.values.resize(end + 1);
      prefix.linear = std::move(ch);
    }
    ConsistencyRow row;
    row.t = full.times[end];
    try {
      auto const est = estimate_continuous(spec.kind, prefix, spec.l_infinity);
      row.drift_hat = est.drift;
      row.sigma_hat = est.sigma;
    } catch (std::exception const&) {
      // Early prefixes may be too short or degenerate; leave the row empty.
    }
    rows.push_back(row);
  }
  return rows;
}

StudyOutcome run_study(StudyConfig const& config, bool write) {
  StudyOutcome outcome;
  std::ostringstream summary;
  switch (config.kind) {
    case StudyKind::Continuous:
    case StudyKind::DiscreteEm:
    case StudyKind::OneRecord:
      summary << "model,parameter,true_value,mean,q_low,q_high,n\n";
      break;
    case StudyKind::Selection:
      summary << "true_model,fitted_model,mean_drift_hat,mean_sigma_hat,mean_aic,wins,n\n";
      break;
    case StudyKind::Pc:
      summary << "model,reps,nc,pc\n";
      break;
    case StudyKind::Consistency:
      summary << "model,reps,improved,fraction\n";
      break;
  }

  for (std::size_t j = 0; j < config.models.size(); ++j) {
    auto const& model = config.models[j];
    ModelSpec const& spec = model.spec;
    std::string const name(to_string(spec.kind));
    RngStream const base(config.seed, j);
    Simulator const sim = config.simulator_for(spec.kind);
    std::size_t const reps = config.replications;
    outcome.replications += reps;

    if (config.kind == StudyKind::Pc) {
      auto const pc = pc_estimate(spec, reps, config.grid, config.initial, config.k,
                                  base, sim, config.threads, config.likelihood);
      std::ostringstream out;
      write_pc_csv(out, pc);
      outcome.outputs.emplace_back(name + "_pc.csv", out.str());
      for (auto const& rec : pc.records) {
        if (!rec.failure.empty()) {
          ++outcome.failures;
          std::fprintf(stderr, "%s rep %zu failed: %s\n", name.c_str(), rec.rep,
                       rec.failure.c_str());
        }
      }
      summary << name << ',' << reps << ',' << pc.nc << ',' << format_double(pc.pc) << '\n';
      continue;
    }

    EmConfig em = config.em;
    if (model.theta0) em.theta0 = model.theta0;

    std::vector<RepResult> results(reps);
    parallel_for(reps, config.threads, [&](std::size_t r) {
      RepResult& res = results[r];
      RngStream const sub = base.child(r);
      try {
        RngStream path_stream = sub.child(0);
        switch (config.kind) {
          case StudyKind::Continuous: {
            double const x0 = config.initial.draw(path_stream);
            Path const path = simulate(sim, spec, x0, config.grid, path_stream);
            auto const est = estimate_continuous(spec.kind, subsample(path, config.stride),
                                                 spec.l_infinity);
            res.drift = est.drift;
            res.sigma = est.sigma;
            break;
          }
          case StudyKind::DiscreteEm: {
            double const x0 = config.initial.draw(path_stream);
            Path const path = simulate(sim, spec, x0, config.grid, path_stream);
            auto trace = run_em(spec.kind, subsample(path, config.stride), spec.l_infinity,
                                em, sub.child(1));
            res.drift = trace.drift_ml;
            res.sigma = trace.sigma_ml;
            res.extra = trace.sweep_resamples;
            res.extra2 = trace.bridge_fallbacks;
            if (r < config.trace_reps) res.trace = std::move(trace);
            break;
          }
          case StudyKind::OneRecord: {
            Path const composite = one_record_study(
                spec, config.individuals, config.grid, config.initial.beta_a,
                config.initial.beta_b, config.stride, sub.child(0), sim, config.composite);
            res.extra = composite.fallback_count;
            auto trace = run_em(spec.kind, to_observations(composite), spec.l_infinity, em,
                                sub.child(1));
            res.drift = trace.drift_ml;
            res.sigma = trace.sigma_ml;
            if (r < config.trace_reps) res.trace = std::move(trace);
            break;
          }
          case StudyKind::Selection: {
            double const x0 = config.initial.draw(path_stream);
            Path const path = simulate(sim, spec, x0, config.grid, path_stream);
            res.report = fit_all_and_rank(subsample(path, config.stride), spec.l_infinity,
                                          config.k, config.likelihood);
            break;
          }
          case StudyKind::Consistency: {
            double const x0 = config.initial.draw(path_stream);
            res.sweep = consistency_sweep(spec, config.grid, config.checkpoint_stride,
                                          path_stream, x0, sim);
            break;
          }
          case StudyKind::Pc:
            break;
        }
      } catch (std::exception const& e) {
        res.failure = e.what();
        if (res.failure.empty()) res.failure = "unknown error";
      }
    });

    std::vector<double> drifts;
    std::vector<double> sigmas;
    std::ostringstream reps_csv;
    switch (config.kind) {
      case StudyKind::Continuous:
        reps_csv << "rep,drift_hat,sigma_hat,status\n";
        break;
      case StudyKind::DiscreteEm:
        reps_csv << "rep,drift_hat,sigma_hat,sweep_resamples,bridge_fallbacks,status\n";
        break;
      case StudyKind::OneRecord:
        reps_csv << "rep,drift_hat,sigma_hat,fallback_count,status\n";
        break;
      case StudyKind::Selection:
        reps_csv << "rep,model,drift_hat,sigma_hat,loglik,aic,rank,status\n";
        break;
      case StudyKind::Consistency:
        reps_csv << "rep,t,drift_hat,sigma_hat\n";
        break;
      case StudyKind::Pc:
        break;
    }

    std::array<std::vector<double>, 3> sel_drift;
    std::array<std::vector<double>, 3> sel_sigma;
    std::array<std::vector<double>, 3> sel_aic;
    std::array<std::size_t, 3> wins{};
    std::size_t improved = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      auto const& res = results[r];
      if (!res.failure.empty()) {
        ++outcome.failures;
        std::fprintf(stderr, "%s rep %zu failed: %s\n", name.c_str(), r, res.failure.c_str());
      }
      std::string const status = status_text(res.failure);
      switch (config.kind) {
        case StudyKind::Continuous:
          reps_csv << r << ',' << format_double(res.drift) << ',' << format_double(res.sigma)
                   << ',' << status << '\n';
          break;
        case StudyKind::DiscreteEm:
        case StudyKind::OneRecord:
          reps_csv << r << ',' << format_double(res.drift) << ',' << format_double(res.sigma)
                   << ',' << res.extra;
          if (config.kind == StudyKind::DiscreteEm) reps_csv << ',' << res.extra2;
          reps_csv << ',' << status << '\n';
          if (res.trace) {
            std::ostringstream tr;
            write_em_trace_csv(tr, *res.trace);
            char label[32];
            std::snprintf(label, sizeof label, "_trace_%04zu.csv", r);
            outcome.outputs.emplace_back(name + label, tr.str());
          }
          break;
        case StudyKind::Selection:
          if (res.report) {
            for (auto const& fit : res.report->fits) {
              auto const m = static_cast<std::size_t>(fit.kind);
              reps_csv << r << ',' << to_string(fit.kind) << ','
                       << format_double(fit.drift_hat) << ',' << format_double(fit.sigma_hat)
                       << ',' << format_double(fit.loglik) << ',' << format_double(fit.aic)
                       << ',' << fit.rank << ',' << status_text(fit.failure) << '\n';
              if (fit.ok()) {
                sel_drift[m].push_back(fit.drift_hat);
                sel_sigma[m].push_back(fit.sigma_hat);
                sel_aic[m].push_back(fit.aic);
              }
            }
            ++wins[static_cast<std::size_t>(res.report->winner)];
          } else {
            reps_csv << r << ",,,,,,," << status << '\n';
          }
          break;
        case StudyKind::Consistency: {
          for (auto const& row : res.sweep) {
            reps_csv << r << ',' << format_double(row.t) << ','
                     << optional_number(row.drift_hat) << ','
                     << optional_number(row.sigma_hat) << '\n';
          }
          if (!res.sweep.empty() && res.sweep.front().drift_hat &&
              res.sweep.back().drift_hat &&
              std::abs(*res.sweep.back().drift_hat - spec.drift) <
                  std::abs(*res.sweep.front().drift_hat - spec.drift)) {
            ++improved;
          }
          break;
        }
        case StudyKind::Pc:
          break;
      }
      if (res.failure.empty() && std::isfinite(res.drift)) {
        drifts.push_back(res.drift);
        sigmas.push_back(res.sigma);
      }
    }

    switch (config.kind) {
      case StudyKind::Continuous:
      case StudyKind::DiscreteEm:
      case StudyKind::OneRecord:
        summary_rows(summary, spec, drifts, sigmas);
        outcome.outputs.emplace_back(name + "_replications.csv", reps_csv.str());
        break;
      case StudyKind::Selection:
        for (ModelKind fitted : kAllModels) {
          auto const m = static_cast<std::size_t>(fitted);
          double const nan = std::nan("");
          bool const any = !sel_drift[m].empty();
          summary << name << ',' << to_string(fitted) << ','
                  << format_double(any ? mean(sel_drift[m]) : nan) << ','
                  << format_double(any ? mean(sel_sigma[m]) : nan) << ','
                  << format_double(any ? mean(sel_aic[m]) : nan) << ',' << wins[m] << ','
                  << sel_drift[m].size() << '\n';
        }
        outcome.outputs.emplace_back(name + "_selection.csv", reps_csv.str());
        break;
      case StudyKind::Consistency:
        summary << name << ',' << reps << ',' << improved << ','
                << format_double(static_cast<double>(improved) / static_cast<double>(reps))
                << '\n';
        outcome.outputs.emplace_back(name + "_consistency.csv", reps_csv.str());
        break;
      case StudyKind::Pc:
        break;
    }
  }
  outcome.outputs.emplace_back("summary.csv", summary.str());

  json files = json::array();
  for (auto const& [file, _] : outcome.outputs) files.push_back(file);
  // Thread count and output directory do not change any result, so they are
  // left out of the manifest; it then matches byte for byte across re-runs.
  json recorded = config.to_json();
  recorded.erase("threads");
  recorded.erase("output_dir");
  std::string const canonical = recorded.dump();
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  json manifest = {{"version", kVersion},
                   {"seed", config.seed},
                   {"config_hash", std::string(hash)},
                   {"config", recorded},
                   {"files", files},
                   {"replications", outcome.replications},
                   {"failures", outcome.failures}};
  outcome.outputs.emplace_back("manifest.json", manifest.dump(2) + "\n");

  for (auto const& [file, _] : outcome.outputs) outcome.files.push_back(file);
  if (write) {
    std::filesystem::create_directories(config.output_dir);
    for (auto const& [file, contents] : outcome.outputs) {
      write_file((std::filesystem::path(config.output_dir) / file).string(), contents);
    }
  }
  return outcome;
}

}  // namespace growthsde
