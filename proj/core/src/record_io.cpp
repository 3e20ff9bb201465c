#include "ridgepois/record_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <system_error>

#include "ridgepois/error.hpp"

namespace ridgepois {

std::string to_string(Centering mode) {
  return mode == Centering::Population ? "population" : "empirical";
}

Centering parse_centering(const std::string& text) {
  if (text == "population") return Centering::Population;
  if (text == "empirical") return Centering::Empirical;
  throw Error(ErrorCode::InvalidArgument, "unknown centering mode '" + text + "'");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::SchemaMismatch, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::SchemaMismatch, "not an unsigned integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out += '"';
    out += (ch == '\n' || ch == '\r') ? ' ' : ch;
  }
  out += '"';
  return out;
}

template <typename Row>
void write_row(std::ostream& out, const Row& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << fields[i];
  }
  out << '\n';
}

std::string join_header(const std::vector<std::string>& columns) {
  std::string line;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) line += ',';
    line += columns[i];
  }
  return line;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> columns{
      "grid_index",    "trial_index",   "c_target",       "c_effective",   "lambda",
      "theta",         "v_norm",        "p",              "n",             "seed",
      "mu_emp",        "sigma2_emp",    "eta_emp_mc",     "eta_emp_plugin", "mu_theory",
      "sigma2_theory", "eta_theory",    "C_theory",       "centering_mode", "wall_time_ms",
      "status",        "warning",       "dataset",
  };
  return columns;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << join_header(sweep_csv_columns()) << '\n';
  for (const auto& r : records) {
    const std::vector<std::string> fields{
        std::to_string(r.grid_index), std::to_string(r.trial_index), format_double(r.c_target),
        format_double(r.c_effective), format_double(r.lambda),       format_double(r.theta),
        format_double(r.v_norm),      std::to_string(r.p),           std::to_string(r.n),
        std::to_string(r.seed),       format_double(r.mu_emp),       format_double(r.sigma2_emp),
        format_double(r.eta_emp_mc),  format_double(r.eta_emp_plugin), format_double(r.mu_theory),
        format_double(r.sigma2_theory), format_double(r.eta_theory), format_double(r.C_theory),
        to_string(r.centering_mode),  format_double(r.wall_time_ms), quote(r.status),
        quote(r.warning),             quote(r.dataset),
    };
    write_row(out, fields);
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaMismatch, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (split_csv_line(line) != sweep_csv_columns()) {
    throw Error(ErrorCode::SchemaMismatch, "header does not match the sweep record schema");
  }
  std::vector<SweepRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != sweep_csv_columns().size()) {
      throw Error(ErrorCode::SchemaMismatch, "line " + std::to_string(line_no) + " has " +
                                                 std::to_string(f.size()) + " fields");
    }
    SweepRecord r;
    r.grid_index = parse_u64(f[0]);
    r.trial_index = parse_u64(f[1]);
    r.c_target = parse_double(f[2]);
    r.c_effective = parse_double(f[3]);
    r.lambda = parse_double(f[4]);
    r.theta = parse_double(f[5]);
    r.v_norm = parse_double(f[6]);
    r.p = parse_u64(f[7]);
    r.n = parse_u64(f[8]);
    r.seed = parse_u64(f[9]);
    r.mu_emp = parse_double(f[10]);
    r.sigma2_emp = parse_double(f[11]);
    r.eta_emp_mc = parse_double(f[12]);
    r.eta_emp_plugin = parse_double(f[13]);
    r.mu_theory = parse_double(f[14]);
    r.sigma2_theory = parse_double(f[15]);
    r.eta_theory = parse_double(f[16]);
    r.C_theory = parse_double(f[17]);
    r.centering_mode = parse_centering(f[18]);
    r.wall_time_ms = parse_double(f[19]);
    r.status = f[20];
    r.warning = f[21];
    r.dataset = f[22];
    records.push_back(std::move(r));
  }
  return records;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  std::vector<std::string> header{"grid_index", "c_target", "c_effective", "lambda", "theta",
                                  "v_norm",     "p",        "n",           "trials_ok", "trials_error"};
  for (const char* col : {"mu_emp", "sigma2_emp", "eta_emp_mc", "eta_emp_plugin"}) {
    for (const char* stat : {"mean", "median", "q25", "q75"}) {
      header.push_back(std::string(col) + "_" + stat);
    }
  }
  for (const char* col : {"mu_theory", "sigma2_theory", "eta_theory", "C_theory", "dataset"}) {
    header.push_back(col);
  }
  out << join_header(header) << '\n';

  for (const auto& r : rows) {
    std::vector<std::string> fields{std::to_string(r.grid_index), format_double(r.c_target),
                                    format_double(r.c_effective), format_double(r.lambda),
                                    format_double(r.theta),       format_double(r.v_norm),
                                    std::to_string(r.p),          std::to_string(r.n),
                                    std::to_string(r.trials_ok),  std::to_string(r.trials_error)};
    for (const Summary* s : {&r.mu_emp, &r.sigma2_emp, &r.eta_emp_mc, &r.eta_emp_plugin}) {
      fields.push_back(format_double(s->mean));
      fields.push_back(format_double(s->median));
      fields.push_back(format_double(s->q25));
      fields.push_back(format_double(s->q75));
    }
    fields.push_back(format_double(r.mu_theory));
    fields.push_back(format_double(r.sigma2_theory));
    fields.push_back(format_double(r.eta_theory));
    fields.push_back(format_double(r.C_theory));
    fields.push_back(quote(r.dataset));
    write_row(out, fields);
  }
}

void write_resolvent_csv(std::ostream& out, const std::vector<ResolventCheckRow>& rows) {
  out << "check_name,p,n,seed,observed,predicted,abs_error\n";
  for (const auto& r : rows) {
    const std::vector<std::string> fields{r.check_name,         std::to_string(r.p),
                                          std::to_string(r.n),  std::to_string(r.seed),
                                          format_double(r.observed), format_double(r.predicted),
                                          format_double(r.abs_error)};
    write_row(out, fields);
  }
}

std::string aggregate_path_for(const std::string& csv_path) {
  const auto slash = csv_path.find_last_of('/');
  const auto dot = csv_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return csv_path + "_agg";
  }
  return csv_path.substr(0, dot) + "_agg" + csv_path.substr(dot);
}

}  // namespace ridgepois
