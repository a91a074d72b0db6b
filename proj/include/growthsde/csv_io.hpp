#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "growthsde/em.hpp"
#include "growthsde/one_record.hpp"
#include "growthsde/path.hpp"
#include "growthsde/select.hpp"

namespace growthsde {

/// Shortest decimal form that reads back to the same double ("inf", "nan"
/// for non-finite values). Locale-independent.
std::string format_double(double x);
/// Parses a full field as a double; throws ValidationError otherwise.
double parse_double(std::string_view field);

/// `t,x` rows.
void write_path_csv(std::ostream& out, Path const& path);
void write_observations_csv(std::ostream& out, ObservationSet const& obs);
/// Reads the `t,x` format. Throws ValidationError with the line number on
/// malformed input.
ObservationSet read_observations_csv(std::istream& in);

/// Long format `t,individual_id,x`, one row per measurement.
void write_cross_section_csv(std::ostream& out, CrossSection const& cs);
/// Rows are grouped by t in order of first appearance.
CrossSection read_cross_section_csv(std::istream& in);

/// `iter,drift,sigma` for k = 1..K followed by the row `ml,<drift>,<sigma>`.
void write_em_trace_csv(std::ostream& out, EmTrace const& trace);

/// `model,drift_hat,sigma_hat,loglik,aic,rank`, one row per model; the
/// winner has rank 1.
void write_selection_csv(std::ostream& out, SelectionReport const& report);

/// `rep,winner,correct` rows and a final `summary,pc=<pc>,nc=<nc>` line.
void write_pc_csv(std::ostream& out, PcResult const& result);

/// Opens `path` for writing or throws std::runtime_error.
void write_file(std::string const& path, std::string const& contents);
std::string read_file(std::string const& path);

}  // namespace growthsde
