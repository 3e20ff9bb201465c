#include "tabular.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ridgepois/error.hpp"
#include "ridgepois/record_io.hpp"

namespace ridgepois::cli {

namespace {

using nlohmann::json;

const std::set<std::string>& integer_columns() {
  static const std::set<std::string> cols{"grid_index", "trial_index", "p", "n", "seed", "trials_ok",
                                          "trials_error"};
  return cols;
}

const std::set<std::string>& text_columns() {
  static const std::set<std::string> cols{"centering_mode", "status", "warning", "dataset", "check_name"};
  return cols;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "jsonl" || text == "json-lines") return OutputFormat::JsonLines;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + text + "' (csv or json-lines)");
}

std::string extension_for(OutputFormat format) { return format == OutputFormat::Csv ? ".csv" : ".jsonl"; }

std::string csv_to_jsonl(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) return "";
  const std::vector<std::string> header = split_csv_line(line);
  std::string out;
  while (std::getline(in, line)) {
    const std::vector<std::string> fields = split_csv_line(line);
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) {
      const std::string& col = header[i];
      if (text_columns().contains(col)) {
        obj[col] = fields[i];
      } else if (integer_columns().contains(col)) {
        std::uint64_t v = 0;
        std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
        obj[col] = v;
      } else {
        const double v = parse_double(fields[i]);
        obj[col] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
      }
    }
    out += obj.dump() + '\n';
  }
  return out;
}

std::vector<SweepRecord> read_sweep_jsonl(const std::string& text) {
  const std::vector<std::string>& columns = sweep_csv_columns();
  std::string csv;
  for (std::size_t i = 0; i < columns.size(); ++i) csv += (i ? "," : "") + columns[i];
  csv += '\n';

  std::istringstream in(text);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaMismatch, std::string("bad JSON line: ") + e.what());
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (!obj.contains(columns[i])) throw Error(ErrorCode::SchemaMismatch, "missing field " + columns[i]);
      const json& v = obj[columns[i]];
      std::string field;
      if (v.is_null()) {
        field = "nan";
      } else if (v.is_string()) {
        field = quote_csv(v.get<std::string>());
      } else if (v.is_number_unsigned()) {
        field = std::to_string(v.get<std::uint64_t>());
      } else {
        field = format_double(v.get<double>());
      }
      csv += (i ? "," : "") + field;
    }
    csv += '\n';
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::SchemaMismatch, "input has no records");
  std::istringstream csv_in(csv);
  return read_sweep_csv(csv_in);
}

}  // namespace ridgepois::cli
