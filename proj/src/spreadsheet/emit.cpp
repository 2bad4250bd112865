#include <cstdio>
#include <fstream>
#include <set>

#include "lcpbridge/error.hpp"
#include "lcpbridge/spreadsheet.hpp"
#include "lcpbridge/tabular.hpp"

namespace lcpbridge::spreadsheet {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::InvalidManifest, message); }

std::string_view kind_name(SheetKind k) { return k == SheetKind::Class ? "class" : "bridge"; }

// Format code written into the container for a manifest cell format.
std::string container_format(const std::string& cell_format) {
    if (cell_format == format::kInteger || cell_format == format::kDecimal || cell_format == format::kDate ||
        cell_format == format::kDateTime) {
        return cell_format;
    }
    if (cell_format == format::kTime) return "@";
    return {};
}

std::string quote_sheet(const std::string& name) {
    std::string out = "'";
    for (const char c : name) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

}  // namespace

void check_manifest(const WorkbookManifest& manifest) {
    std::set<std::string> names;
    for (const auto& s : manifest.sheets) {
        if (s.name.empty() || s.name.size() > xlsx::kMaxSheetName) invalid("sheet name '" + s.name + "' is not 1-31 characters");
        if (!names.insert(pivot::to_lower(s.name)).second) invalid("duplicate sheet name " + s.name);
    }
    for (const auto& s : manifest.sheets) {
        std::set<std::string> headers;
        for (const auto& c : s.columns) {
            if (!headers.insert(pivot::to_lower(c.header)).second) invalid("sheet " + s.name + " repeats header " + c.header);
            if (c.validation.kind == Validation::Kind::Dropdown && !manifest.find_sheet(c.validation.source_sheet)) {
                invalid("column " + s.name + "." + c.header + " references missing sheet " + c.validation.source_sheet);
            }
            if (c.validation.kind == Validation::Kind::List && c.validation.values.empty()) {
                invalid("column " + s.name + "." + c.header + " has an empty value list");
            }
        }
        if (s.sample_row && s.sample_row->size() != s.columns.size()) {
            invalid("sheet " + s.name + " sample row has " + std::to_string(s.sample_row->size()) + " values for " +
                    std::to_string(s.columns.size()) + " columns");
        }
    }
}

ordered_json manifest_to_json(const WorkbookManifest& manifest) {
    ordered_json doc;
    doc["workbook_name"] = manifest.workbook_name;
    doc["sheets"] = ordered_json::array();
    for (const auto& s : manifest.sheets) {
        ordered_json sheet;
        sheet["name"] = s.name;
        sheet["kind"] = kind_name(s.kind);
        sheet["columns"] = ordered_json::array();
        for (const auto& c : s.columns) {
            ordered_json v;
            switch (c.validation.kind) {
                case Validation::Kind::None: v["kind"] = "none"; break;
                case Validation::Kind::Dropdown:
                    v["kind"] = "dropdown";
                    v["source_sheet"] = c.validation.source_sheet;
                    break;
                case Validation::Kind::List:
                    v["kind"] = "list";
                    v["values"] = c.validation.values;
                    break;
            }
            sheet["columns"].push_back({{"header", c.header}, {"cell_format", c.cell_format}, {"validation", v}});
        }
        if (s.sample_row) sheet["sample_row"] = *s.sample_row;
        doc["sheets"].push_back(std::move(sheet));
    }
    return doc;
}

WorkbookManifest manifest_from_json(const json& doc) {
    try {
        WorkbookManifest m;
        m.workbook_name = doc.at("workbook_name").get<std::string>();
        for (const auto& js : doc.at("sheets")) {
            SheetSpec s;
            s.name = js.at("name").get<std::string>();
            const auto kind = js.at("kind").get<std::string>();
            if (kind != "class" && kind != "bridge") invalid("unknown sheet kind " + kind);
            s.kind = kind == "class" ? SheetKind::Class : SheetKind::Bridge;
            for (const auto& jc : js.at("columns")) {
                ColumnSpec c{jc.at("header").get<std::string>(), jc.at("cell_format").get<std::string>(), {}};
                const auto& jv = jc.at("validation");
                const auto vk = jv.at("kind").get<std::string>();
                if (vk == "dropdown") {
                    c.validation = {Validation::Kind::Dropdown, jv.at("source_sheet").get<std::string>(), {}};
                } else if (vk == "list") {
                    c.validation = {Validation::Kind::List, "", jv.at("values").get<std::vector<std::string>>()};
                } else if (vk != "none") {
                    invalid("unknown validation kind " + vk);
                }
                s.columns.push_back(std::move(c));
            }
            if (js.contains("sample_row")) s.sample_row = js.at("sample_row").get<std::vector<std::string>>();
            m.sheets.push_back(std::move(s));
        }
        check_manifest(m);
        return m;
    } catch (const json::exception& e) {
        invalid(std::string("malformed manifest: ") + e.what());
    }
}

xlsx::Cell sample_cell(const std::string& literal, const std::string& cell_format) {
    if (literal.empty()) return std::monostate{};
    try {
        if (cell_format == format::kInteger || cell_format == format::kDecimal) return std::stod(literal);
        if (cell_format == format::kBoolean) return literal == "TRUE";
        int d = 0, mo = 0, y = 0, h = 0, mi = 0;
        if (cell_format == format::kDate && std::sscanf(literal.c_str(), "%d/%d/%d", &d, &mo, &y) == 3) {
            return xlsx::Date{y, mo, d};
        }
        if (cell_format == format::kDateTime &&
            std::sscanf(literal.c_str(), "%d/%d/%d %d:%d", &d, &mo, &y, &h, &mi) == 5) {
            return xlsx::DateTime{{y, mo, d}, h, mi, 0};
        }
    } catch (const std::exception&) {
        // not numeric after all; keep the text
    }
    return literal;
}

xlsx::Workbook render_workbook(const WorkbookManifest& manifest) {
    check_manifest(manifest);
    xlsx::Workbook wb;
    for (const auto& s : manifest.sheets) {
        xlsx::Sheet sheet{s.name, {}, {}, {}};
        std::vector<xlsx::Cell> header;
        for (std::size_t i = 0; i < s.columns.size(); ++i) {
            const auto& c = s.columns[i];
            header.emplace_back(c.header);
            sheet.column_formats.push_back(container_format(c.cell_format));
            const auto col = xlsx::column_name(i);
            const auto range = col + "2:" + col + "1048576";
            if (c.validation.kind == Validation::Kind::Dropdown) {
                sheet.validations.push_back({range, quote_sheet(c.validation.source_sheet) + "!$A$2:$A$1048576"});
            } else if (c.validation.kind == Validation::Kind::List) {
                std::string list;
                for (const auto& v : c.validation.values) list += (list.empty() ? "" : ",") + v;
                sheet.validations.push_back({range, "\"" + list + "\""});
            }
        }
        sheet.rows.push_back(std::move(header));
        if (s.sample_row) {
            std::vector<xlsx::Cell> row;
            for (std::size_t i = 0; i < s.columns.size(); ++i) {
                row.push_back(sample_cell((*s.sample_row)[i], s.columns[i].cell_format));
            }
            sheet.rows.push_back(std::move(row));
        }
        wb.sheets.push_back(std::move(sheet));
    }
    if (wb.sheets.empty()) wb.sheets.push_back({"Sheet1", {}, {}, {}});
    return wb;
}

std::filesystem::path manifest_path(const std::filesystem::path& workbook) {
    return workbook.string() + ".manifest.json";
}

void emit_workbook(const WorkbookManifest& manifest, const std::filesystem::path& path) {
    const auto bytes = xlsx::write_workbook(render_workbook(manifest));
    auto write = [](const std::filesystem::path& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::UnwritablePath, "cannot write " + p.string());
        out << content;
        out.close();
        if (!out) throw Error(ErrorCode::UnwritablePath, "cannot write " + p.string());
    };
    write(path, bytes);
    write(manifest_path(path), manifest_to_json(manifest).dump(2) + "\n");
}

std::vector<std::filesystem::path> emit_csv(const WorkbookManifest& manifest, const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    for (const auto& sheet : manifest.sheets) {
        std::vector<std::vector<std::string>> rows(1);
        for (const auto& c : sheet.columns) rows[0].push_back(c.header);
        if (sheet.sample_row) rows.push_back(*sheet.sample_row);
        const auto path = dir / (sheet.name + ".csv");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << tabular::format_csv(rows);
        out.close();
        if (!out) throw Error(ErrorCode::UnwritablePath, "cannot write " + path.string());
        written.push_back(path);
    }
    return written;
}

}  // namespace lcpbridge::spreadsheet
