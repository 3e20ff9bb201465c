#pragma once

// CSV <-> JSON-lines conversion for the tables the CLI writes. The CSV
// writers in the core stay the single source of column order and number
// formatting; JSON-lines output is derived from their text.

#include <string>
#include <vector>

#include "ridgepois/record.hpp"

namespace ridgepois::cli {

enum class OutputFormat { Csv, JsonLines };

OutputFormat parse_output_format(const std::string& text);
std::string extension_for(OutputFormat format);

/// One JSON object per data row. Integer and text columns keep their type,
/// other columns become numbers, with nan/inf written as null.
std::string csv_to_jsonl(const std::string& csv_text);

/// Inverse of csv_to_jsonl for the sweep schema; throws SchemaMismatch on
/// empty input or missing columns.
std::vector<SweepRecord> read_sweep_jsonl(const std::string& text);

}  // namespace ridgepois::cli
