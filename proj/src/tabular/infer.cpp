#include <regex>
#include <set>

#include "lcpbridge/pivot/validate.hpp"
#include "lcpbridge/tabular.hpp"

namespace lcpbridge::tabular {

using namespace lcpbridge::pivot;

namespace {

std::string_view trim(std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
    return v;
}

bool valid_date(int y, int m, int d) {
    static const int kDays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (y < 1 || m < 1 || m > 12 || d < 1 || d > kDays[m - 1]) return false;
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return m != 2 || d <= 28 || leap;
}

bool match_date(const std::string& s) {
    static const std::regex dmy(R"((\d{2})/(\d{2})/(\d{4}))");
    static const std::regex ymd(R"((\d{4})-(\d{2})-(\d{2}))");
    std::smatch m;
    if (std::regex_match(s, m, dmy)) return valid_date(std::stoi(m[3]), std::stoi(m[2]), std::stoi(m[1]));
    if (std::regex_match(s, m, ymd)) return valid_date(std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]));
    return false;
}

std::string unique_name(const std::string& wanted, std::set<std::string>& used) {
    std::string name = wanted;
    for (int n = 2; !used.insert(to_lower(name)).second; ++n) name = wanted + "_" + std::to_string(n);
    return name;
}

}  // namespace

bool parses_bool(std::string_view v) {
    v = trim(v);
    return iequals(v, "true") || iequals(v, "false");
}

bool parses_int(std::string_view v) {
    static const std::regex re(R"([+-]?\d+)");
    return std::regex_match(std::string(trim(v)), re);
}

bool parses_float(std::string_view v) {
    static const std::regex re(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
    return std::regex_match(std::string(trim(v)), re);
}

bool parses_date(std::string_view v) { return match_date(std::string(trim(v))); }

bool parses_datetime(std::string_view v) {
    static const std::regex re(R"((\S+)[ T](\d{2}):(\d{2})(:(\d{2}))?)");
    const std::string s(trim(v));
    std::smatch m;
    if (!std::regex_match(s, m, re) || !match_date(m[1])) return false;
    const int h = std::stoi(m[2]), mi = std::stoi(m[3]), sec = m[5].matched ? std::stoi(m[5]) : 0;
    return h < 24 && mi < 60 && sec < 60;
}

std::optional<Primitive> infer_type(const std::vector<std::string>& values) {
    std::vector<std::string_view> cells;
    for (const auto& v : values) {
        if (!trim(v).empty()) cells.push_back(v);
    }
    if (cells.empty()) return std::nullopt;
    auto all = [&](bool (*pred)(std::string_view)) {
        for (auto c : cells) {
            if (!pred(c)) return false;
        }
        return true;
    };
    if (all(parses_bool)) return Primitive::Bool;
    if (all(parses_int)) return Primitive::Int;
    if (all(parses_float)) return Primitive::Float;
    if (all(parses_date)) return Primitive::Date;
    if (all(parses_datetime)) return Primitive::DateTime;
    return Primitive::Str;
}

InferResult infer_model(const TabularSource& source, const InferOptions& options) {
    InferResult out;
    out.model.name = sanitize_identifier(options.model_name);
    std::set<std::string> class_names;
    for (const auto& table : source.tables) {
        const auto class_name = unique_name(sanitize_identifier(table.name), class_names);
        if (class_name != table.name) {
            out.losses.add("class", table.name, LossReason::Renamed, Severity::Warning, "renamed to " + class_name);
        }
        Class c{class_name, {}};
        std::set<std::string> property_names;
        for (const auto& column : table.columns) {
            const auto name = unique_name(sanitize_identifier(column.header), property_names);
            const auto qualified = class_name + "." + name;
            if (name != column.header) {
                out.losses.add("property", class_name + "." + column.header, LossReason::Renamed, Severity::Warning,
                               "renamed to " + name);
            }
            auto type = infer_type(column.values);
            if (!type) {
                out.losses.add("property", qualified, LossReason::TypeDefaulted, Severity::Warning,
                               "no values to infer from; typed str");
                type = Primitive::Str;
            }
            c.properties.push_back({name, *type, false});

            if (options.suggest_references) {
                for (const auto& other : source.tables) {
                    if (&other != &table && iequals(other.name, column.header)) {
                        out.losses.add("property", qualified, LossReason::CandidateReference, Severity::Info,
                                       "may reference " + other.name + " (many-to-one)");
                    }
                }
            }
        }
        out.model.classes.push_back(std::move(c));
    }
    if (!source.tables.empty()) {
        out.losses.add("model", out.model.name, LossReason::AssociationsUnknown, Severity::Warning,
                       "tabular sources carry no relationships between tables");
    }
    require_valid(out.model);
    return out;
}

}  // namespace lcpbridge::tabular
