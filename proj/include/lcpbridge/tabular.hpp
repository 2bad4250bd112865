#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lcpbridge/loss_report.hpp"
#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::tabular {

struct Column {
    std::string header;
    std::vector<std::string> values;  ///< sampled cells, empty strings included
};

struct Table {
    std::string name;
    std::vector<Column> columns;
};

struct TabularSource {
    std::vector<Table> tables;
};

/// Rows kept per table when loading.
inline constexpr std::size_t kSampleRows = 1000;

/// RFC 4180 CSV: comma separator, double-quote quoting with "" escapes,
/// CRLF or LF line ends, optional UTF-8 BOM. Blank lines are skipped.
/// Throws MalformedDocument on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// RFC 4180 text with CRLF line ends; fields holding a comma, quote or
/// line break are quoted.
std::string format_csv(const std::vector<std::vector<std::string>>& rows);

/// Builds a table from rows whose first row is the header. Throws
/// EmptyFile without a header, DuplicateHeader, and MalformedDocument for
/// rows longer than the header (short rows are padded).
Table table_from_rows(std::string name, const std::vector<std::vector<std::string>>& rows);

/// One table per CSV file (named after the file stem) or per workbook
/// sheet (.xlsx). Throws UnreadableFile, EmptyFile, DuplicateHeader and
/// DuplicateTable.
TabularSource load_tabular(const std::vector<std::filesystem::path>& paths);

/// Precedence: bool > int > float > date > datetime > str; empty cells are
/// ignored. Returns nullopt when every cell is empty.
std::optional<pivot::Primitive> infer_type(const std::vector<std::string>& values);

bool parses_bool(std::string_view v);
bool parses_int(std::string_view v);
bool parses_float(std::string_view v);
bool parses_date(std::string_view v);      ///< DD/MM/YYYY or YYYY-MM-DD
bool parses_datetime(std::string_view v);  ///< date, space or T, HH:MM[:SS]

struct InferOptions {
    std::string model_name = "Model";
    /// Flags columns named after another table as CANDIDATE_REFERENCE
    /// (report only, no association is created).
    bool suggest_references = false;
};

struct InferResult {
    pivot::DomainModel model;
    LossReport losses;
};

InferResult infer_model(const TabularSource& source, const InferOptions& options = {});

}  // namespace lcpbridge::tabular
