#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lcpbridge::xlsx {

// ZIP container, just enough for Office Open XML packages.

/// Packs `files` (path -> bytes) into a ZIP archive. Entries are deflated
/// and carry a fixed timestamp, so equal input yields equal bytes.
std::string write_zip(const std::vector<std::pair<std::string, std::string>>& files);

/// Unpacks stored or deflated entries. Throws MalformedDocument.
std::map<std::string, std::string> read_zip(std::string_view archive);

// Workbook content model.

struct Date {
    int year = 1900, month = 1, day = 1;
    bool operator==(const Date&) const = default;
};
struct DateTime {
    Date date;
    int hour = 0, minute = 0, second = 0;
    bool operator==(const DateTime&) const = default;
};

using Cell = std::variant<std::monostate, std::string, double, bool, Date, DateTime>;

/// A list validation on a range, e.g. {"B2:B1048576", "Author!$A$2:$A$1048576"}
/// or {"C2:C1048576", "\"TRUE,FALSE\""}. The formula is stored as written in
/// the sheet XML (without the leading `=`).
struct ListValidation {
    std::string range;
    std::string formula;
    bool operator==(const ListValidation&) const = default;
};

struct Sheet {
    std::string name;
    std::vector<std::vector<Cell>> rows;  ///< row 0 is written as a bold header
    std::vector<ListValidation> validations;
    /// Number format code per column ("0", "0.00", "DD/MM/YYYY", ...);
    /// empty or missing entries mean General.
    std::vector<std::string> column_formats;
};

struct Workbook {
    std::vector<Sheet> sheets;
};

/// Serializes a workbook as an .xlsx package.
std::string write_workbook(const Workbook& workbook);

/// Reads an .xlsx package. Numeric cells with a date number format come
/// back as Date/DateTime; shared and inline strings are both accepted.
Workbook read_workbook(std::string_view bytes);

/// Text rendering used by tabular import: dates as DD/MM/YYYY, date-times
/// as DD/MM/YYYY HH:MM[:SS], booleans as TRUE/FALSE, integral numbers
/// without a fraction.
std::string cell_text(const Cell& cell);

/// Days since 1899-12-30 (the spreadsheet epoch) and back.
long to_serial(const Date& date);
Date from_serial(long serial);

/// Column letters for a zero-based index: 0 -> A, 26 -> AA.
std::string column_name(std::size_t index);

/// Maximum sheet-name length the format allows.
inline constexpr std::size_t kMaxSheetName = 31;

}  // namespace lcpbridge::xlsx
