#include <fstream>
#include <set>
#include <sstream>

#include "lcpbridge/error.hpp"
#include "lcpbridge/tabular.hpp"
#include "lcpbridge/xlsx.hpp"

namespace lcpbridge::tabular {

std::string format_csv(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            const auto& f = row[i];
            if (f.find_first_of(",\"\r\n") == std::string::npos) {
                out += f;
                continue;
            }
            out += '"';
            for (const char c : f) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        }
        out += "\r\n";
    }
    return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        // A line holding nothing at all is skipped rather than read as one empty cell.
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (ch == ',') {
            end_field();
        } else if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            // handled by the '\n' on the next iteration
        } else if (ch == '\n' || ch == '\r') {
            end_row();
            ++line;
        } else {
            field.push_back(ch);
            field_started = true;
        }
    }
    if (quoted) throw Error(ErrorCode::MalformedDocument, "unterminated quoted field at line " + std::to_string(line));
    if (field_started || !row.empty()) end_row();
    return rows;
}

Table table_from_rows(std::string name, const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) throw Error(ErrorCode::EmptyFile, "table " + name + " has no header row");
    Table t{std::move(name), {}};
    std::set<std::string> seen;
    for (const auto& h : rows[0]) {
        if (!seen.insert(h).second) {
            throw Error(ErrorCode::DuplicateHeader, "table " + t.name + " repeats header '" + h + "'");
        }
        t.columns.push_back({h, {}});
    }
    const std::size_t last = std::min(rows.size(), kSampleRows + 1);
    for (std::size_t r = 1; r < last; ++r) {
        if (rows[r].size() > t.columns.size()) {
            throw Error(ErrorCode::MalformedDocument, "table " + t.name + " row " + std::to_string(r + 1) + " has " +
                                                          std::to_string(rows[r].size()) + " cells for " +
                                                          std::to_string(t.columns.size()) + " headers");
        }
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            t.columns[c].values.push_back(c < rows[r].size() ? rows[r][c] : std::string());
        }
    }
    return t;
}

namespace {

std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::UnreadableFile, "cannot read " + path.string());
    return ss.str();
}

std::vector<std::vector<std::string>> sheet_rows(const xlsx::Sheet& sheet) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : sheet.rows) {
        std::vector<std::string> cells;
        for (const auto& cell : row) cells.push_back(xlsx::cell_text(cell));
        while (!cells.empty() && cells.back().empty()) cells.pop_back();
        if (!cells.empty()) rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TabularSource load_tabular(const std::vector<std::filesystem::path>& paths) {
    TabularSource source;
    std::set<std::string> names;
    auto add = [&](Table t, const std::filesystem::path& from) {
        if (!names.insert(pivot::to_lower(t.name)).second) {
            throw Error(ErrorCode::DuplicateTable, "table " + t.name + " from " + from.string() + " is already loaded");
        }
        source.tables.push_back(std::move(t));
    };
    for (const auto& path : paths) {
        if (std::filesystem::is_directory(path)) throw Error(ErrorCode::UnreadableFile, path.string() + " is a directory");
        const auto bytes = read_bytes(path);
        if (pivot::to_lower(path.extension().string()) == ".xlsx") {
            const auto workbook = xlsx::read_workbook(bytes);
            for (const auto& sheet : workbook.sheets) {
                try {
                    add(table_from_rows(sheet.name, sheet_rows(sheet)), path);
                } catch (Error& e) {
                    if (e.code() != ErrorCode::EmptyFile) throw;
                    // An untouched sheet contributes nothing; a workbook with no data at all is empty.
                }
            }
            if (workbook.sheets.empty()) throw Error(ErrorCode::EmptyFile, path.string() + " has no sheets");
        } else {
            auto rows = parse_csv(bytes);
            if (rows.empty()) throw Error(ErrorCode::EmptyFile, path.string() + " has no header row");
            add(table_from_rows(path.stem().string(), rows), path);
        }
    }
    return source;
}

}  // namespace lcpbridge::tabular
