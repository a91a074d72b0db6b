#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "growthsde/em.hpp"
#include "growthsde/model.hpp"
#include "growthsde/one_record.hpp"
#include "growthsde/path.hpp"
#include "growthsde/rng.hpp"
#include "growthsde/select.hpp"
#include "growthsde/simulate.hpp"

namespace growthsde {

enum class StudyKind { Continuous, DiscreteEm, OneRecord, Selection, Pc, Consistency };

std::string_view to_string(StudyKind kind);
StudyKind parse_study_kind(std::string_view name);

/// A true model of a study plus an optional per-model EM starting point.
struct StudyModel {
  ModelSpec spec;
  std::optional<Theta> theta0;
};

struct StudyConfig {
  StudyKind kind = StudyKind::Continuous;
  std::vector<StudyModel> models;
  X0Policy initial;
  TimeGrid grid;
  /// Defaults to default_simulator(model) for path studies; the one-record
  /// and pc studies default to Milstein.
  std::optional<Simulator> simulator;
  /// Observation stride applied to each simulated path.
  std::size_t stride = 1;
  EmConfig em;
  /// EM traces written for the first `trace_reps` replications.
  std::size_t trace_reps = 1;
  std::size_t individuals = 100;
  CompositeOptions composite;
  int k = 2;
  SelectionLikelihood likelihood = SelectionLikelihood::Full;
  std::size_t checkpoint_stride = 100;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  unsigned threads = 0;

  /// Parses and validates a config document. Throws ValidationError naming
  /// the offending field (e.g. "grid.steps: must be a positive integer").
  static StudyConfig from_json(nlohmann::json const& doc);
  static StudyConfig from_json_text(std::string const& text);
  /// Fully defaulted config; from_json(to_json()) reproduces it.
  nlohmann::json to_json() const;
  Simulator simulator_for(ModelKind kind) const;
};

struct SummaryRow {
  std::string parameter;
  double true_value = 0.0;
  double mean = 0.0;
  double q_low = 0.0;
  double q_high = 0.0;
  std::size_t n = 0;
};

/// Mean and central 95% type-7 interval of the samples.
SummaryRow summarize(std::string parameter, double true_value,
                     std::vector<double> const& samples, double coverage = 0.95);

struct ConsistencyRow {
  double t = 0.0;
  std::optional<double> drift_hat;
  std::optional<double> sigma_hat;
};

/// Simulates one path and re-estimates on each prefix ending at a multiple
/// of checkpoint_stride. Estimator failures leave the row's estimates empty.
std::vector<ConsistencyRow> consistency_sweep(ModelSpec const& spec,
                                              TimeGrid const& grid,
                                              std::size_t checkpoint_stride,
                                              RngStream const& stream,
                                              double x0, Simulator sim);

struct StudyOutcome {
  std::size_t replications = 0;
  std::size_t failures = 0;
  std::vector<std::string> files;
  /// CSV contents by file name, exactly as written.
  std::vector<std::pair<std::string, std::string>> outputs;

  /// More than 5% of replications failed.
  bool too_many_failures() const {
    return failures * 20 > replications;
  }
};

/// Runs the study. Model j, replication r draws from
/// RngStream(seed, j).child(r); outputs are ordered by replication index so
/// they are byte-identical for any thread count. Writes to output_dir unless
/// `write` is false.
StudyOutcome run_study(StudyConfig const& config, bool write = true);

/// 64-bit FNV-1a of the bytes.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace growthsde
