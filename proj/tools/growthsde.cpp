// Command-line front end: one subcommand per library operation.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "growthsde/csv_io.hpp"
#include "growthsde/em.hpp"
#include "growthsde/errors.hpp"
#include "growthsde/mle.hpp"
#include "growthsde/one_record.hpp"
#include "growthsde/select.hpp"
#include "growthsde/simulate.hpp"
#include "growthsde/study.hpp"
#include "growthsde/version.hpp"

namespace gs = growthsde;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// Reads --config files written as a flat JSON object whose keys are long
// option names, e.g. {"drift": 0.6, "t-end": 10, "theta0": [0.5, 0.2]}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(CLI::App const*, bool, bool, std::string) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(input);
    } catch (nlohmann::json::parse_error const& e) {
      throw CLI::ConversionError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config: expected a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (auto const& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      auto push = [&](nlohmann::json const& v) {
        if (v.is_string()) {
          item.inputs.push_back(v.get<std::string>());
        } else if (v.is_boolean()) {
          item.inputs.push_back(v.get<bool>() ? "true" : "false");
        } else if (v.is_number()) {
          item.inputs.push_back(v.dump());
        } else {
          throw CLI::ConversionError(key + ": unsupported value type");
        }
      };
      if (value.is_array()) {
        for (auto const& v : value) push(v);
      } else {
        push(value);
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

void attach_config(CLI::App* cmd) {
  cmd->set_config("--config", "", "JSON file with option values (keys are long option names)");
  cmd->config_formatter(std::make_shared<JsonConfig>());
}

void emit(std::string const& out, std::string const& contents) {
  if (out.empty() || out == "-") {
    std::cout << contents;
    std::cout.flush();
  } else {
    gs::write_file(out, contents);
  }
}

gs::ObservationSet load_observations(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gs::ValidationError("--in: cannot open '" + path + "'");
  return gs::read_observations_csv(in);
}

struct ModelOptions {
  std::string model;
  double drift = 0.6;
  double sigma = 0.1;
  double l_infinity = 1.0;

  void add(CLI::App* cmd, bool with_params) {
    cmd->add_option("--model", model, "gompertz | vonbertalanffy | logistic")->required();
    if (with_params) {
      cmd->add_option("--drift", drift, "Drift parameter b, kappa or r")->capture_default_str();
      cmd->add_option("--sigma", sigma, "Diffusion parameter")->capture_default_str();
    }
    cmd->add_option("--l-infinity", l_infinity, "Asymptotic size (Von Bertalanffy)")
        ->capture_default_str();
  }
  gs::ModelKind kind() const { return gs::parse_model_kind(model); }
  gs::ModelSpec spec() const { return gs::ModelSpec::make(kind(), drift, sigma, l_infinity); }
};

struct GridOptions {
  double t0 = 0.0;
  double t_end = 10.0;
  std::size_t steps = 10000;

  void add(CLI::App* cmd) {
    cmd->add_option("--t0", t0, "Start time")->capture_default_str();
    cmd->add_option("--t-end", t_end, "End time")->capture_default_str();
    cmd->add_option("--steps", steps, "Number of grid steps")->capture_default_str();
  }
  gs::TimeGrid grid() const { return gs::TimeGrid::make(t0, t_end, steps); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic growth models: simulation, estimation and model selection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gs::kVersion);

  std::uint64_t seed = 0;
  std::string out = "-";
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
    cmd->add_option("--out", out, "Output file ('-' for stdout)")->capture_default_str();
  };

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate one path and write it as t,x CSV");
  ModelOptions sim_model;
  GridOptions sim_grid;
  double sim_x0 = 0.001;
  std::string sim_scheme;
  std::size_t sim_stride = 1;
  sim_model.add(sim_cmd, true);
  sim_grid.add(sim_cmd);
  sim_cmd->add_option("--x0", sim_x0, "Initial state")->capture_default_str();
  sim_cmd->add_option("--simulator", sim_scheme, "milstein | exact | solution (default per model)");
  sim_cmd->add_option("--stride", sim_stride, "Keep every stride-th point")->capture_default_str();
  common(sim_cmd);
  attach_config(sim_cmd);

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "Closed-form estimates from a t,x CSV");
  ModelOptions est_model;
  std::string est_in;
  est_model.add(est_cmd, false);
  est_cmd->add_option("--in", est_in, "Observations CSV")->required();
  common(est_cmd);
  attach_config(est_cmd);

  // em
  auto* em_cmd = app.add_subcommand("em", "EM estimation from sparse observations");
  ModelOptions em_model;
  std::string em_in;
  gs::EmConfig em_cfg;
  std::optional<std::size_t> em_burn_in;
  std::vector<double> em_theta0;
  em_model.add(em_cmd, false);
  em_cmd->add_option("--in", em_in, "Observations CSV")->required();
  em_cmd->add_option("--iterations", em_cfg.iterations, "EM iterations K")->capture_default_str();
  em_cmd->add_option("--burn-in", em_burn_in, "Discarded iterations K0 (default K/2)");
  em_cmd->add_option("--delta-target", em_cfg.delta_target, "Bridge step")->capture_default_str();
  em_cmd->add_option("--theta0", em_theta0, "Starting drift and sigma")->expected(2);
  common(em_cmd);
  attach_config(em_cmd);

  // one-record
  auto* or_cmd = app.add_subcommand("one-record", "Composite path from one-record data");
  ModelOptions or_model;
  GridOptions or_grid;
  std::string or_in;
  std::size_t or_individuals = 100;
  std::vector<double> or_beta{1.0, 100.0};
  std::size_t or_stride = 10;
  std::string or_policy = "resample-then-max";
  std::string or_scheme = "milstein";
  or_cmd->add_option("--in", or_in, "Cross-section CSV (t,individual_id,x); skips simulation");
  or_cmd->add_option("--model", or_model.model, "Model to simulate individuals from");
  or_cmd->add_option("--drift", or_model.drift)->capture_default_str();
  or_cmd->add_option("--sigma", or_model.sigma)->capture_default_str();
  or_cmd->add_option("--l-infinity", or_model.l_infinity)->capture_default_str();
  or_grid.add(or_cmd);
  or_cmd->add_option("--individuals", or_individuals, "Individuals M")->capture_default_str();
  or_cmd->add_option("--beta", or_beta, "Beta initial distribution (alpha beta)")
      ->expected(2)
      ->capture_default_str();
  or_cmd->add_option("--stride", or_stride, "Keep every stride-th point")->capture_default_str();
  or_cmd->add_option("--policy", or_policy, "resample-then-max | resample-until-hit")
      ->capture_default_str();
  or_cmd->add_option("--simulator", or_scheme, "Simulator for individuals")->capture_default_str();
  common(or_cmd);
  attach_config(or_cmd);

  // select
  auto* sel_cmd = app.add_subcommand("select", "Fit all models and rank them by AIC");
  std::string sel_in;
  double sel_l_inf = 1.0;
  int sel_k = 2;
  sel_cmd->add_option("--in", sel_in, "Path CSV")->required();
  sel_cmd->add_option("--l-infinity", sel_l_inf)->capture_default_str();
  sel_cmd->add_option("--k", sel_k, "Parameter count in the AIC")->capture_default_str();
  std::string sel_lik = "full";
  sel_cmd->add_option("--likelihood", sel_lik, "full | girsanov")->capture_default_str();
  common(sel_cmd);
  attach_config(sel_cmd);

  // pc
  auto* pc_cmd = app.add_subcommand("pc", "Monte Carlo probability of correct selection");
  ModelOptions pc_model;
  GridOptions pc_grid;
  std::size_t pc_reps = 200;
  std::optional<double> pc_x0;
  std::vector<double> pc_beta;
  int pc_k = 2;
  unsigned pc_threads = 0;
  std::string pc_scheme = "milstein";
  pc_model.add(pc_cmd, true);
  pc_grid.add(pc_cmd);
  pc_cmd->add_option("--reps", pc_reps, "Replications")->capture_default_str();
  auto* x0_opt = pc_cmd->add_option("--x0", pc_x0, "Fixed initial state (default 0.01)");
  pc_cmd->add_option("--beta", pc_beta, "Beta initial distribution instead of --x0")
      ->expected(2)
      ->excludes(x0_opt);
  pc_cmd->add_option("--k", pc_k)->capture_default_str();
  pc_cmd->add_option("--threads", pc_threads, "Worker threads (0 = all cores)");
  pc_cmd->add_option("--simulator", pc_scheme)->capture_default_str();
  std::string pc_lik = "full";
  pc_cmd->add_option("--likelihood", pc_lik, "full | girsanov")->capture_default_str();
  common(pc_cmd);
  attach_config(pc_cmd);

  // study
  auto* study_cmd = app.add_subcommand("study", "Run a replication study from a JSON config");
  std::string study_config;
  std::optional<std::string> study_out;
  std::optional<std::uint64_t> study_seed;
  std::optional<unsigned> study_threads;
  study_cmd->add_option("--config", study_config, "Study config (JSON)")->required();
  study_cmd->add_option("--out", study_out, "Output directory (overrides output_dir)");
  study_cmd->add_option("--seed", study_seed, "Master seed (overrides seed)");
  study_cmd->add_option("--threads", study_threads, "Worker threads (overrides threads)");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    std::ostringstream buf;
    if (sim_cmd->parsed()) {
      auto const spec = sim_model.spec();
      auto const scheme = sim_scheme.empty() ? gs::default_simulator(spec.kind)
                                             : gs::parse_simulator(sim_scheme);
      gs::RngStream stream(seed, 0);
      auto const path = gs::simulate(scheme, spec, sim_x0, sim_grid.grid(), stream);
      if (sim_stride == 1) {
        gs::write_path_csv(buf, path);
      } else {
        gs::write_observations_csv(buf, gs::subsample(path, sim_stride));
      }
      emit(out, buf.str());
    } else if (est_cmd->parsed()) {
      auto const obs = load_observations(est_in);
      auto const est = gs::estimate_continuous(est_model.kind(), obs, est_model.l_infinity);
      buf << "model,drift_hat,sigma_hat,n_used\n"
          << gs::to_string(est.kind) << ',' << gs::format_double(est.drift) << ','
          << gs::format_double(est.sigma) << ',' << est.n_used << '\n';
      emit(out, buf.str());
    } else if (em_cmd->parsed()) {
      auto const obs = load_observations(em_in);
      em_cfg.burn_in = em_burn_in.value_or(em_cfg.iterations / 2);
      if (!em_theta0.empty()) em_cfg.theta0 = gs::Theta{em_theta0[0], em_theta0[1]};
      auto const trace = gs::run_em(em_model.kind(), obs, em_model.l_infinity, em_cfg,
                                    gs::RngStream(seed, 0));
      gs::write_em_trace_csv(buf, trace);
      emit(out, buf.str());
    } else if (or_cmd->parsed()) {
      gs::CompositeOptions opts;
      opts.policy = gs::parse_empty_set_policy(or_policy);
      gs::Path composite;
      if (!or_in.empty()) {
        std::ifstream in(or_in, std::ios::binary);
        if (!in) throw gs::ValidationError("--in: cannot open '" + or_in + "'");
        auto const cs = gs::read_cross_section_csv(in);
        gs::RngStream stream(seed, 0);
        composite = gs::build_composite_path(cs, stream, opts);
      } else {
        if (or_model.model.empty()) throw gs::ValidationError("--model: required without --in");
        composite = gs::one_record_study(or_model.spec(), or_individuals, or_grid.grid(),
                                         or_beta[0], or_beta[1], or_stride,
                                         gs::RngStream(seed, 0),
                                         gs::parse_simulator(or_scheme), opts);
      }
      if (composite.fallback_count > 0) {
        std::fprintf(stderr, "composite path: %zu column-maximum fallbacks\n",
                     composite.fallback_count);
      }
      gs::write_path_csv(buf, composite);
      emit(out, buf.str());
    } else if (sel_cmd->parsed()) {
      auto const obs = load_observations(sel_in);
      auto const report = gs::fit_all_and_rank(obs, sel_l_inf, sel_k,
                                                   gs::parse_selection_likelihood(sel_lik));
      for (auto const& fit : report.fits) {
        if (!fit.ok()) {
          std::fprintf(stderr, "%s not fitted: %s\n", std::string(gs::to_string(fit.kind)).c_str(),
                       fit.failure.c_str());
        }
      }
      gs::write_selection_csv(buf, report);
      emit(out, buf.str());
    } else if (pc_cmd->parsed()) {
      gs::X0Policy policy = pc_beta.empty() ? gs::X0Policy::fixed(pc_x0.value_or(0.01))
                                            : gs::X0Policy::beta(pc_beta[0], pc_beta[1]);
      auto const result = gs::pc_estimate(pc_model.spec(), pc_reps, pc_grid.grid(), policy,
                                          pc_k, gs::RngStream(seed, 0),
                                          gs::parse_simulator(pc_scheme), pc_threads,
                                          gs::parse_selection_likelihood(pc_lik));
      for (auto const& rec : result.records) {
        if (!rec.failure.empty()) {
          std::fprintf(stderr, "rep %zu failed: %s\n", rec.rep, rec.failure.c_str());
        }
      }
      gs::write_pc_csv(buf, result);
      emit(out, buf.str());
    } else if (study_cmd->parsed()) {
      auto config = gs::StudyConfig::from_json_text(gs::read_file(study_config));
      if (study_out) config.output_dir = *study_out;
      if (study_seed) config.seed = *study_seed;
      if (study_threads) config.threads = *study_threads;
      auto const outcome = gs::run_study(config);
      std::fprintf(stderr, "%zu replications, %zu failed; wrote %zu files to %s\n",
                   outcome.replications, outcome.failures, outcome.files.size(),
                   config.output_dir.c_str());
      if (outcome.too_many_failures()) {
        std::fprintf(stderr, "more than 5%% of replications failed\n");
        return kExitRuntime;
      }
    }
  } catch (std::invalid_argument const& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (std::domain_error const& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (std::exception const& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
