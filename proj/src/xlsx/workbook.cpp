#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "lcpbridge/error.hpp"
#include "lcpbridge/xlsx.hpp"
#include "xml.hpp"

namespace lcpbridge::xlsx {

namespace {

// Howard Hinnant's days_from_civil / civil_from_days.
long days_from_civil(long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

Date civil_from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

const long kEpoch = days_from_civil(1899, 12, 30);

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string cell_ref(std::size_t row, std::size_t col) { return column_name(col) + std::to_string(row + 1); }

constexpr const char* kDefaultDate = "dd/mm/yyyy";
constexpr const char* kDefaultDateTime = "dd/mm/yyyy hh:mm:ss";

int builtin_format_id(const std::string& code) {
    if (code.empty() || code == "General") return 0;
    if (code == "0") return 1;
    if (code == "0.00") return 2;
    if (code == "@") return 49;
    return -1;
}

std::string builtin_format_code(int id) {
    switch (id) {
        case 1: return "0";
        case 2: return "0.00";
        case 14: return "mm-dd-yy";
        case 22: return "m/d/yy h:mm";
        case 49: return "@";
        default: return {};
    }
}

// Cell formats: xf 0 is General, xf 1 the bold header, then one xf per
// distinct number format used anywhere in the workbook.
class StyleTable {
public:
    explicit StyleTable(const Workbook& workbook) {
        add(kDefaultDate);
        add(kDefaultDateTime);
        for (const auto& sheet : workbook.sheets) {
            for (const auto& code : sheet.column_formats) add(code);
        }
    }

    int style_of(const std::string& code) const {
        if (code.empty() || code == "General") return 0;
        for (std::size_t i = 0; i < formats_.size(); ++i) {
            if (formats_[i].second == code) return static_cast<int>(i) + 2;
        }
        return 0;
    }

    std::string xml() const {
        std::string numfmts, xfs;
        int custom = 0;
        for (const auto& [id, code] : formats_) {
            if (id >= 164) {
                numfmts += "<numFmt numFmtId=\"" + std::to_string(id) + "\" formatCode=\"" + xml::escape(code) + "\"/>";
                ++custom;
            }
            xfs += "<xf numFmtId=\"" + std::to_string(id) +
                   "\" fontId=\"0\" fillId=\"0\" borderId=\"0\" xfId=\"0\" applyNumberFormat=\"1\"/>";
        }
        return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
               "<styleSheet xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\">"
               "<numFmts count=\"" + std::to_string(custom) + "\">" + numfmts + "</numFmts>"
               "<fonts count=\"2\"><font><sz val=\"11\"/><name val=\"Calibri\"/></font>"
               "<font><b/><sz val=\"11\"/><name val=\"Calibri\"/></font></fonts>"
               "<fills count=\"2\"><fill><patternFill patternType=\"none\"/></fill>"
               "<fill><patternFill patternType=\"gray125\"/></fill></fills>"
               "<borders count=\"1\"><border><left/><right/><top/><bottom/><diagonal/></border></borders>"
               "<cellStyleXfs count=\"1\"><xf numFmtId=\"0\" fontId=\"0\" fillId=\"0\" borderId=\"0\"/></cellStyleXfs>"
               "<cellXfs count=\"" + std::to_string(formats_.size() + 2) + "\">"
               "<xf numFmtId=\"0\" fontId=\"0\" fillId=\"0\" borderId=\"0\" xfId=\"0\"/>"
               "<xf numFmtId=\"0\" fontId=\"1\" fillId=\"0\" borderId=\"0\" xfId=\"0\" applyFont=\"1\"/>" +
               xfs +
               "</cellXfs>"
               "<cellStyles count=\"1\"><cellStyle name=\"Normal\" xfId=\"0\" builtinId=\"0\"/></cellStyles>"
               "</styleSheet>";
    }

private:
    void add(const std::string& code) {
        if (code.empty() || code == "General" || style_of(code) != 0) return;
        int id = builtin_format_id(code);
        if (id < 0) id = next_custom_++;
        formats_.emplace_back(id, code);
    }

    std::vector<std::pair<int, std::string>> formats_;
    int next_custom_ = 164;
};

// Whether a number format shows a date, and if so whether it shows a time.
struct DateFormat {
    bool date = false;
    bool time = false;
};

DateFormat classify_format(int id, const std::string& code);

std::string sheet_xml(const Sheet& sheet, const StyleTable& styles) {
    auto column_code = [&](std::size_t c) {
        return c < sheet.column_formats.size() ? sheet.column_formats[c] : std::string();
    };
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
        "<worksheet xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\">";
    if (!sheet.rows.empty()) {
        out += "<sheetViews><sheetView workbookViewId=\"0\"><pane ySplit=\"1\" topLeftCell=\"A2\" state=\"frozen\"/>"
               "</sheetView></sheetViews>";
    }
    std::string cols;
    for (std::size_t c = 0; c < sheet.column_formats.size(); ++c) {
        const int style = styles.style_of(column_code(c));
        if (style == 0) continue;
        const auto n = std::to_string(c + 1);
        cols += "<col min=\"" + n + "\" max=\"" + n + "\" width=\"18\" style=\"" + std::to_string(style) +
                "\" customWidth=\"1\"/>";
    }
    if (!cols.empty()) out += "<cols>" + cols + "</cols>";
    out += "<sheetData>";
    for (std::size_t r = 0; r < sheet.rows.size(); ++r) {
        out += "<row r=\"" + std::to_string(r + 1) + "\">";
        for (std::size_t c = 0; c < sheet.rows[r].size(); ++c) {
            const auto& cell = sheet.rows[r][c];
            if (std::holds_alternative<std::monostate>(cell)) continue;
            const auto code = column_code(c);
            int style = r == 0 ? 1 : styles.style_of(code);
            if (r > 0 && (std::holds_alternative<Date>(cell) || std::holds_alternative<DateTime>(cell)) &&
                !classify_format(-1, code).date) {
                style = styles.style_of(std::holds_alternative<Date>(cell) ? kDefaultDate : kDefaultDateTime);
            }
            const std::string open =
                "<c r=\"" + cell_ref(r, c) + "\"" + (style ? " s=\"" + std::to_string(style) + "\"" : "");
            if (const auto* s = std::get_if<std::string>(&cell)) {
                out += open + " t=\"inlineStr\"><is><t xml:space=\"preserve\">" + xml::escape(*s) + "</t></is></c>";
            } else if (const auto* d = std::get_if<double>(&cell)) {
                out += open + "><v>" + format_number(*d) + "</v></c>";
            } else if (const auto* b = std::get_if<bool>(&cell)) {
                out += open + " t=\"b\"><v>" + (*b ? "1" : "0") + "</v></c>";
            } else if (const auto* date = std::get_if<Date>(&cell)) {
                out += open + "><v>" + std::to_string(to_serial(*date)) + "</v></c>";
            } else if (const auto* dt = std::get_if<DateTime>(&cell)) {
                const double serial = static_cast<double>(to_serial(dt->date)) +
                                      (dt->hour * 3600 + dt->minute * 60 + dt->second) / 86400.0;
                out += open + "><v>" + format_number(serial) + "</v></c>";
            }
        }
        out += "</row>";
    }
    out += "</sheetData>";
    if (!sheet.validations.empty()) {
        out += "<dataValidations count=\"" + std::to_string(sheet.validations.size()) + "\">";
        for (const auto& v : sheet.validations) {
            out += "<dataValidation type=\"list\" allowBlank=\"1\" showErrorMessage=\"1\" sqref=\"" +
                   xml::escape(v.range) + "\"><formula1>" + xml::escape(v.formula) + "</formula1></dataValidation>";
        }
        out += "</dataValidations>";
    }
    out += "</worksheet>";
    return out;
}

DateFormat classify_format(int id, const std::string& code) {
    if ((id >= 14 && id <= 17)) return {true, false};
    if (id == 22) return {true, true};
    if ((id >= 18 && id <= 21) || (id >= 45 && id <= 47)) return {true, true};
    DateFormat f;
    bool quoted = false, bracket = false;
    for (const char ch : code) {
        if (ch == '"') quoted = !quoted;
        else if (!quoted && ch == '[') bracket = true;
        else if (!quoted && ch == ']') bracket = false;
        else if (!quoted && !bracket) {
            const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            if (c == 'd' || c == 'y') f.date = true;
            if (c == 'h' || c == 's') f.time = true;
        }
    }
    return f;
}

std::size_t column_index(std::string_view ref) {
    std::size_t col = 0, i = 0;
    while (i < ref.size() && std::isalpha(static_cast<unsigned char>(ref[i]))) {
        col = col * 26 + static_cast<std::size_t>(std::toupper(static_cast<unsigned char>(ref[i])) - 'A' + 1);
        ++i;
    }
    if (col == 0) throw Error(ErrorCode::MalformedDocument, "bad cell reference " + std::string(ref));
    return col - 1;
}

// `t="d"` cells carry ISO 8601 text.
Cell iso_cell(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &sec);
    if (n < 3) return text;
    if (n == 3) return Date{y, mo, d};
    return DateTime{{y, mo, d}, h, mi, sec};
}

std::string resolve_target(const std::string& base_dir, const std::string& target) {
    if (!target.empty() && target[0] == '/') return target.substr(1);
    return base_dir + target;
}

}  // namespace

long to_serial(const Date& date) {
    return days_from_civil(date.year, static_cast<unsigned>(date.month), static_cast<unsigned>(date.day)) - kEpoch;
}

Date from_serial(long serial) { return civil_from_days(serial + kEpoch); }

std::string column_name(std::size_t index) {
    std::string out;
    ++index;
    while (index > 0) {
        const auto rem = (index - 1) % 26;
        out.insert(out.begin(), static_cast<char>('A' + rem));
        index = (index - 1) / 26;
    }
    return out;
}

std::string cell_text(const Cell& cell) {
    char buf[32];
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isfinite(*d) && std::floor(*d) == *d && std::fabs(*d) < 1e15) {
            return std::to_string(static_cast<long long>(*d));
        }
        return format_number(*d);
    }
    if (const auto* b = std::get_if<bool>(&cell)) return *b ? "TRUE" : "FALSE";
    if (const auto* date = std::get_if<Date>(&cell)) {
        std::snprintf(buf, sizeof buf, "%02d/%02d/%04d", date->day, date->month, date->year);
        return buf;
    }
    if (const auto* dt = std::get_if<DateTime>(&cell)) {
        std::snprintf(buf, sizeof buf, "%02d/%02d/%04d %02d:%02d", dt->date.day, dt->date.month, dt->date.year,
                      dt->hour, dt->minute);
        std::string out = buf;
        if (dt->second != 0) {
            std::snprintf(buf, sizeof buf, ":%02d", dt->second);
            out += buf;
        }
        return out;
    }
    return {};
}

std::string write_workbook(const Workbook& workbook) {
    std::set<std::string> names;
    for (const auto& s : workbook.sheets) {
        if (s.name.empty() || s.name.size() > kMaxSheetName) {
            throw Error(ErrorCode::InvalidManifest, "sheet name '" + s.name + "' must have 1 to 31 characters");
        }
        if (!names.insert(s.name).second) throw Error(ErrorCode::InvalidManifest, "duplicate sheet " + s.name);
    }

    std::string types =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
        "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
        "<Default Extension=\"rels\" ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
        "<Default Extension=\"xml\" ContentType=\"application/xml\"/>"
        "<Override PartName=\"/xl/workbook.xml\" "
        "ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml\"/>"
        "<Override PartName=\"/xl/styles.xml\" "
        "ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.styles+xml\"/>";
    std::string book =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
        "<workbook xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\" "
        "xmlns:r=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships\"><sheets>";
    std::string rels =
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
        "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">";
    const StyleTable styles(workbook);
    std::vector<std::pair<std::string, std::string>> sheets;
    for (std::size_t i = 0; i < workbook.sheets.size(); ++i) {
        const auto n = std::to_string(i + 1);
        types += "<Override PartName=\"/xl/worksheets/sheet" + n +
                 ".xml\" ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.worksheet+xml\"/>";
        book += "<sheet name=\"" + xml::escape(workbook.sheets[i].name) + "\" sheetId=\"" + n + "\" r:id=\"rId" + n +
                "\"/>";
        rels += "<Relationship Id=\"rId" + n +
                "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet\" "
                "Target=\"worksheets/sheet" + n + ".xml\"/>";
        sheets.emplace_back("xl/worksheets/sheet" + n + ".xml", sheet_xml(workbook.sheets[i], styles));
    }
    types += "</Types>";
    book += "</sheets></workbook>";
    rels += "<Relationship Id=\"rId" + std::to_string(workbook.sheets.size() + 1) +
            "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/styles\" "
            "Target=\"styles.xml\"/></Relationships>";

    std::vector<std::pair<std::string, std::string>> files = {
        {"[Content_Types].xml", types},
        {"_rels/.rels",
         "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
         "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
         "<Relationship Id=\"rId1\" "
         "Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/officeDocument\" "
         "Target=\"xl/workbook.xml\"/></Relationships>"},
        {"xl/workbook.xml", book},
        {"xl/_rels/workbook.xml.rels", rels},
        {"xl/styles.xml", styles.xml()},
    };
    files.insert(files.end(), sheets.begin(), sheets.end());
    return write_zip(files);
}

static Workbook read_parts(std::string_view bytes) {
    const auto files = read_zip(bytes);
    auto part = [&](const std::string& path) -> const std::string& {
        auto it = files.find(path);
        if (it == files.end()) throw Error(ErrorCode::MalformedDocument, "workbook part " + path + " is missing");
        return it->second;
    };

    std::vector<std::string> shared;
    if (files.count("xl/sharedStrings.xml")) {
        const auto sst = xml::parse(part("xl/sharedStrings.xml"));
        for (const auto* si : sst.all("si")) {
            // Rich text runs hold <t> under <r>; phonetic runs (<rPh>) are not cell text.
            std::string text;
            if (const auto* t = si->child("t")) text = t->text;
            for (const auto* r : si->all("r")) {
                if (const auto* t = r->child("t")) text += t->text;
            }
            shared.push_back(std::move(text));
        }
    }

    std::vector<DateFormat> xf_formats;
    std::vector<std::string> xf_codes;
    if (files.count("xl/styles.xml")) {
        const auto styles = xml::parse(part("xl/styles.xml"));
        std::map<int, std::string> codes;
        if (const auto* fmts = styles.child("numFmts")) {
            for (const auto* f : fmts->all("numFmt")) {
                codes[std::stoi(f->attribute("numFmtId", "0"))] = f->attribute("formatCode");
            }
        }
        if (const auto* xfs = styles.child("cellXfs")) {
            for (const auto* xf : xfs->all("xf")) {
                const int id = std::stoi(xf->attribute("numFmtId", "0"));
                const auto code = codes.count(id) ? codes[id] : builtin_format_code(id);
                xf_formats.push_back(classify_format(id, code));
                xf_codes.push_back(code);
            }
        }
    }

    std::map<std::string, std::string> targets;
    const auto rels = xml::parse(part("xl/_rels/workbook.xml.rels"));
    for (const auto* r : rels.all("Relationship")) targets[r->attribute("Id")] = r->attribute("Target");

    Workbook out;
    const auto book = xml::parse(part("xl/workbook.xml"));
    const auto* sheets = book.child("sheets");
    if (!sheets) return out;
    for (const auto* s : sheets->all("sheet")) {
        Sheet sheet;
        sheet.name = s->attribute("name");
        const auto rid = s->attribute("id");
        if (!targets.count(rid)) throw Error(ErrorCode::MalformedDocument, "sheet " + sheet.name + " has no part");
        const auto ws = xml::parse(part(resolve_target("xl/", targets[rid])));
        if (const auto* cols = ws.child("cols")) {
            for (const auto* col : cols->all("col")) {
                const auto style = static_cast<std::size_t>(std::stoul(col->attribute("style", "0")));
                if (style == 0 || style >= xf_codes.size() || xf_codes[style].empty()) continue;
                const auto lo = std::stoul(col->attribute("min", "1"));
                const auto hi = std::min<unsigned long>(std::stoul(col->attribute("max", "1")), 16384);
                for (auto c = lo; c >= 1 && c <= hi; ++c) {
                    if (sheet.column_formats.size() < c) sheet.column_formats.resize(c);
                    sheet.column_formats[c - 1] = xf_codes[style];
                }
            }
        }
        if (const auto* data = ws.child("sheetData")) {
            for (const auto* row : data->all("row")) {
                const auto r = static_cast<std::size_t>(std::stoul(row->attribute("r", std::to_string(sheet.rows.size() + 1))));
                if (r == 0) throw Error(ErrorCode::MalformedDocument, "row index 0 in " + sheet.name);
                if (sheet.rows.size() < r) sheet.rows.resize(r);
                auto& cells = sheet.rows[r - 1];
                for (const auto* c : row->all("c")) {
                    const auto ref = c->attribute("r");
                    const auto col = ref.empty() ? cells.size() : column_index(ref);
                    if (cells.size() <= col) cells.resize(col + 1);
                    const auto type = c->attribute("t", "n");
                    const auto* v = c->child("v");
                    Cell value;
                    if (type == "inlineStr") {
                        if (const auto* is = c->child("is")) value = is->deep_text();
                    } else if (type == "s" && v) {
                        const auto index = static_cast<std::size_t>(std::stoul(v->text));
                        if (index >= shared.size()) throw Error(ErrorCode::MalformedDocument, "bad shared string index");
                        value = shared[index];
                    } else if ((type == "str" || type == "e") && v) {
                        value = v->text;
                    } else if (type == "d" && v) {
                        value = iso_cell(v->text);
                    } else if (type == "b" && v) {
                        value = v->text == "1";
                    } else if (v && !v->text.empty()) {
                        const double number = std::stod(v->text);
                        const auto style = static_cast<std::size_t>(std::stoul(c->attribute("s", "0")));
                        const auto fmt = style < xf_formats.size() ? xf_formats[style] : DateFormat{};
                        if (fmt.date || fmt.time) {
                            const long day = static_cast<long>(std::floor(number));
                            const long seconds = std::lround((number - static_cast<double>(day)) * 86400.0);
                            const Date date = from_serial(day + seconds / 86400);
                            const long s2 = seconds % 86400;
                            if (fmt.time) {
                                value = DateTime{date, static_cast<int>(s2 / 3600), static_cast<int>(s2 / 60 % 60),
                                                 static_cast<int>(s2 % 60)};
                            } else {
                                value = date;
                            }
                        } else {
                            value = number;
                        }
                    }
                    cells[col] = std::move(value);
                }
            }
        }
        if (const auto* dvs = ws.child("dataValidations")) {
            for (const auto* dv : dvs->all("dataValidation")) {
                if (dv->attribute("type") != "list") continue;
                const auto* f = dv->child("formula1");
                sheet.validations.push_back({dv->attribute("sqref"), f ? f->text : std::string()});
            }
        }
        out.sheets.push_back(std::move(sheet));
    }
    return out;
}

Workbook read_workbook(std::string_view bytes) {
    try {
        return read_parts(bytes);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        // stoi/stod on malformed attribute values
        throw Error(ErrorCode::MalformedDocument, std::string("unreadable workbook: ") + e.what());
    }
}

}  // namespace lcpbridge::xlsx
