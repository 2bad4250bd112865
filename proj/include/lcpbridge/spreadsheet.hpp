#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcpbridge/loss_report.hpp"
#include "lcpbridge/pivot/model.hpp"
#include "lcpbridge/xlsx.hpp"

namespace lcpbridge::spreadsheet {

// Cell formats a column can carry.
namespace format {
inline constexpr const char* kGeneral = "General";
inline constexpr const char* kInteger = "0";
inline constexpr const char* kDecimal = "0.00";
inline constexpr const char* kBoolean = "TRUE/FALSE";
inline constexpr const char* kDate = "DD/MM/YYYY";
inline constexpr const char* kDateTime = "DD/MM/YYYY HH:MM";
inline constexpr const char* kTime = "HH:MM:SS";  ///< stored as text
}  // namespace format

enum class SheetKind { Class, Bridge };

struct Validation {
    enum class Kind { None, Dropdown, List };
    Kind kind = Kind::None;
    std::string source_sheet;         ///< Dropdown: first column of this sheet
    std::vector<std::string> values;  ///< List: allowed literals
    bool operator==(const Validation&) const = default;
};

struct ColumnSpec {
    std::string header;
    std::string cell_format;
    Validation validation;
    bool operator==(const ColumnSpec&) const = default;
};

struct SheetSpec {
    std::string name;
    SheetKind kind = SheetKind::Class;
    std::vector<ColumnSpec> columns;
    /// One literal per column, as it reads in the cell; absent when the
    /// sample row is suppressed.
    std::optional<std::vector<std::string>> sample_row;
    bool operator==(const SheetSpec&) const = default;
};

struct WorkbookManifest {
    std::string workbook_name;
    std::vector<SheetSpec> sheets;
    bool operator==(const WorkbookManifest&) const = default;

    const SheetSpec* find_sheet(std::string_view name) const;
};

struct PlanOptions {
    bool sample_row = true;
};

struct PlanResult {
    WorkbookManifest manifest;
    LossReport losses;
};

/// Sheet per class, column per (inherited or own) property, dropdown per
/// many-to-one (and one-to-one) association, bridge sheet per many-to-many.
PlanResult plan_workbook(const pivot::DomainModel& model, const PlanOptions& options = {});

/// Throws InvalidManifest when sheet names are not unique or too long,
/// a dropdown names a missing sheet, headers repeat, or the sample row
/// does not match the columns.
void check_manifest(const WorkbookManifest& manifest);

nlohmann::ordered_json manifest_to_json(const WorkbookManifest& manifest);
WorkbookManifest manifest_from_json(const nlohmann::json& doc);

/// The workbook content for a manifest. A manifest without sheets yields
/// one blank "Sheet1", since the container needs at least one sheet.
xlsx::Workbook render_workbook(const WorkbookManifest& manifest);

/// `<path>.manifest.json`
std::filesystem::path manifest_path(const std::filesystem::path& workbook);

/// Writes the .xlsx file and its manifest. Throws UnwritablePath.
void emit_workbook(const WorkbookManifest& manifest, const std::filesystem::path& path);

/// Plain CSV fallback: `<dir>/<sheet>.csv` per sheet with the header and,
/// when planned, the sample row. Validations and formats are lost. Returns
/// the written files. Throws UnwritablePath.
std::vector<std::filesystem::path> emit_csv(const WorkbookManifest& manifest, const std::filesystem::path& dir);

/// Cell value for a sample literal in a column of the given format.
xlsx::Cell sample_cell(const std::string& literal, const std::string& cell_format);

}  // namespace lcpbridge::spreadsheet
