#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ridgepois/record.hpp"
#include "ridgepois/resolvent_lab.hpp"
#include "ridgepois/sweep.hpp"

namespace ridgepois {

/// Shortest decimal text that parses back to the same double; "nan",
/// "inf" and "-inf" for non-finite values.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Splits one CSV line (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(std::string_view line);

/// Column names of the sweep CSV, in order.
const std::vector<std::string>& sweep_csv_columns();

/// UTF-8, LF line endings, header row first.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

/// Throws SchemaMismatch on an empty stream, a header that differs from
/// sweep_csv_columns(), or a row with the wrong number of fields.
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

void write_resolvent_csv(std::ostream& out, const std::vector<ResolventCheckRow>& rows);

/// "results.csv" -> "results_agg.csv".
std::string aggregate_path_for(const std::string& csv_path);

}  // namespace ridgepois
