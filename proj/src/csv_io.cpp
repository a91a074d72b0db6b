#include "growthsde/csv_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "growthsde/errors.hpp"

namespace growthsde {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto const comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim_cr(std::string const& line) {
  std::string_view v(line);
  if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
  return v;
}

std::string line_error(std::size_t line, std::string const& what) {
  return "line " + std::to_string(line) + ": " + what;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV input");
  if (trim_cr(line) != header) {
    throw ValidationError("line 1: expected header '" + std::string(header) + "'");
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto const res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view field) {
  double value = 0.0;
  auto const* first = field.data();
  auto const* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto const res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || first == last) {
    throw ValidationError("not a number: '" + std::string(field) + "'");
  }
  return value;
}

void write_path_csv(std::ostream& out, Path const& path) {
  out << "t,x\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_double(path.time(i)) << ',' << format_double(path.values[i]) << '\n';
  }
}

void write_observations_csv(std::ostream& out, ObservationSet const& obs) {
  out << "t,x\n";
  for (std::size_t i = 0; i < obs.size(); ++i) {
    out << format_double(obs.times[i]) << ',' << format_double(obs.values[i]) << '\n';
  }
}

ObservationSet read_observations_csv(std::istream& in) {
  expect_header(in, "t,x");
  ObservationSet obs;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto const view = trim_cr(line);
    if (view.empty()) continue;
    auto const fields = split(view);
    if (fields.size() != 2) throw ValidationError(line_error(lineno, "expected 2 fields"));
    try {
      obs.times.push_back(parse_double(fields[0]));
      obs.values.push_back(parse_double(fields[1]));
    } catch (ValidationError const& e) {
      throw ValidationError(line_error(lineno, e.what()));
    }
  }
  obs.validate();
  return obs;
}

void write_cross_section_csv(std::ostream& out, CrossSection const& cs) {
  out << "t,individual_id,x\n";
  for (std::size_t k = 0; k < cs.size(); ++k) {
    for (std::size_t i = 0; i < cs.columns[k].size(); ++i) {
      out << format_double(cs.times[k]) << ',' << i << ','
          << format_double(cs.columns[k][i]) << '\n';
    }
  }
}

CrossSection read_cross_section_csv(std::istream& in) {
  expect_header(in, "t,individual_id,x");
  CrossSection cs;
  std::map<double, std::size_t> column_of;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto const view = trim_cr(line);
    if (view.empty()) continue;
    auto const fields = split(view);
    if (fields.size() != 3) throw ValidationError(line_error(lineno, "expected 3 fields"));
    double t = 0.0;
    double x = 0.0;
    try {
      t = parse_double(fields[0]);
      x = parse_double(fields[2]);
    } catch (ValidationError const& e) {
      throw ValidationError(line_error(lineno, e.what()));
    }
    if (fields[1].empty()) throw ValidationError(line_error(lineno, "empty individual_id"));
    auto [it, inserted] = column_of.try_emplace(t, cs.times.size());
    if (inserted) {
      cs.times.push_back(t);
      cs.columns.emplace_back();
    }
    cs.columns[it->second].push_back(x);
  }
  cs.validate();
  return cs;
}

void write_em_trace_csv(std::ostream& out, EmTrace const& trace) {
  out << "iter,drift,sigma\n";
  for (std::size_t k = 0; k < trace.drift.size(); ++k) {
    out << k + 1 << ',' << format_double(trace.drift[k]) << ','
        << format_double(trace.sigma[k]) << '\n';
  }
  out << "ml," << format_double(trace.drift_ml) << ','
      << format_double(trace.sigma_ml) << '\n';
}

void write_selection_csv(std::ostream& out, SelectionReport const& report) {
  out << "model,drift_hat,sigma_hat,loglik,aic,rank\n";
  for (auto const& fit : report.fits) {
    out << to_string(fit.kind) << ',' << format_double(fit.drift_hat) << ','
        << format_double(fit.sigma_hat) << ',' << format_double(fit.loglik) << ','
        << format_double(fit.aic) << ',' << fit.rank << '\n';
  }
}

void write_pc_csv(std::ostream& out, PcResult const& result) {
  out << "rep,winner,correct\n";
  for (auto const& rec : result.records) {
    out << rec.rep << ',' << (rec.winner ? to_string(*rec.winner) : "none") << ','
        << (rec.correct ? 1 : 0) << '\n';
  }
  out << "summary,pc=" << format_double(result.pc) << ",nc=" << result.nc << '\n';
}

void write_file(std::string const& path, std::string const& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace growthsde
