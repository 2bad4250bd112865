#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "lcpbridge/apex.hpp"
#include "lcpbridge/error.hpp"
#include "lcpbridge/naming.hpp"
#include "lcpbridge/pivot/validate.hpp"

namespace lcpbridge::apex {

using namespace lcpbridge::pivot;

namespace {

constexpr std::size_t kMaxName = 30;

// Oracle reserved words plus the SQL keywords engines refuse as bare names.
constexpr std::array kReserved = {
    "ACCESS",     "ADD",       "ALL",        "ALTER",     "AND",       "ANY",       "AS",         "ASC",
    "AUDIT",      "BETWEEN",   "BY",         "CASE",      "CAST",      "CHAR",      "CHECK",      "CLUSTER",
    "COLUMN",     "COMMENT",   "COMMIT",     "COMPRESS",  "CONNECT",   "CONSTRAINT", "CREATE",    "CROSS",
    "CURRENT",    "CURRENT_DATE", "CURRENT_TIME", "CURRENT_TIMESTAMP", "DATE", "DECIMAL", "DEFAULT", "DELETE",
    "DESC",       "DISTINCT",  "DROP",       "ELSE",      "END",       "ESCAPE",    "EXCEPT",     "EXCLUSIVE",
    "EXISTS",     "FALSE",     "FILE",       "FLOAT",     "FOR",       "FOREIGN",   "FROM",       "FULL",
    "GRANT",      "GROUP",     "HAVING",     "IDENTIFIED", "IMMEDIATE", "IN",       "INCREMENT",  "INDEX",
    "INITIAL",    "INNER",     "INSERT",     "INTEGER",   "INTERSECT", "INTERVAL",  "INTO",       "IS",
    "JOIN",       "KEY",       "LEFT",       "LEVEL",     "LIKE",      "LIMIT",     "LOCK",       "LONG",
    "MAXEXTENTS", "MINUS",     "MLSLABEL",   "MODE",      "MODIFY",    "NATURAL",   "NOAUDIT",    "NOCOMPRESS",
    "NOT",        "NOWAIT",    "NULL",       "NUMBER",    "OF",        "OFFLINE",   "OFFSET",     "ON",
    "ONLINE",     "OPTION",    "OR",         "ORDER",     "OUTER",     "PCTFREE",   "PRIMARY",    "PRIOR",
    "PUBLIC",     "RAW",       "REFERENCES", "RENAME",    "RESOURCE",  "REVOKE",    "RIGHT",      "ROW",
    "ROWID",      "ROWNUM",    "ROWS",       "SELECT",    "SESSION",   "SET",       "SHARE",      "SIZE",
    "SMALLINT",   "START",     "SUCCESSFUL", "SYNONYM",   "SYSDATE",   "TABLE",     "THEN",       "TIME",
    "TIMESTAMP",  "TO",        "TRIGGER",    "TRUE",      "UID",       "UNION",     "UNIQUE",     "UPDATE",
    "USER",       "USING",     "VALIDATE",   "VALUES",    "VARCHAR",   "VARCHAR2",  "VIEW",       "WHEN",
    "WHENEVER",   "WHERE",     "WITH",
};

std::string quote_literal(const std::string& s) {
    std::string out = "'";
    for (const char c : s) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

class Planner {
public:
    explicit Planner(const DomainModel& model) : model_(model) {}

    PlanResult run() {
        out_.plan.model_name = model_.name;
        for (const auto& c : model_.classes) {
            const auto name = object_name(c.name, "class", c.name);
            claim_table(name, "class " + c.name);
            table_of_[c.name] = name;
        }
        for (const auto& c : model_.classes) class_table(c);
        for (const auto& a : model_.associations) association(a);
        for (auto& t : out_.plan.tables) check_columns(t);
        return std::move(out_);
    }

private:
    // Upper-snake name with reserved words suffixed; records a RENAMED
    // warning when a reserved word or length limit changed it.
    std::string object_name(const std::string& raw, const std::string& kind, const std::string& element) {
        auto name = sql_name(raw);
        if (apex::is_reserved_word(name)) {
            name += "_";
            out_.losses.add(kind, element, LossReason::Renamed, Severity::Warning,
                            "reserved word; named " + name);
        } else if (upper_snake(raw).size() > kMaxName) {
            out_.losses.add(kind, element, LossReason::Renamed, Severity::Warning, "shortened to " + name);
        }
        return name;
    }

    void claim_table(const std::string& name, const std::string& origin) {
        auto [it, fresh] = table_origin_.emplace(name, origin);
        if (!fresh) {
            throw Error(ErrorCode::NameCollision, origin + " and " + it->second + " both map to table " + name);
        }
    }

    std::string constraint(const std::string& prefix, const std::string& table, const std::string& column = {}) {
        auto name = sql_name(prefix + "_" + table + (column.empty() ? "" : "_" + column));
        // Distinct long names can still meet after truncation; keep Oracle's
        // schema-wide uniqueness by numbering.
        const auto base = name;
        for (int n = 2; !constraints_.insert(name).second; ++n) {
            const auto suffix = std::to_string(n);
            name = base.substr(0, std::min(base.size(), kMaxName - suffix.size())) + suffix;
        }
        return name;
    }

    Table& table(const std::string& class_name) {
        const auto& name = table_of_.at(class_name);
        for (auto& t : out_.plan.tables) {
            if (t.name == name) return t;
        }
        throw std::logic_error("no table for " + class_name);
    }

    void class_table(const Class& c) {
        Table t;
        t.name = table_of_.at(c.name);
        t.columns.push_back({"ID", ColumnType::Key, false, std::nullopt, c.name});
        t.primary_key_name = constraint("PK", t.name);
        t.primary_key = {"ID"};
        if (const auto general = model_.general_of(c.name)) {
            t.identity = false;
            t.foreign_keys.push_back({constraint("FK", t.name, "ID"), "ID", table_of_.at(*general), "ID", false});
        }
        for (const auto& p : c.properties) {
            const auto qualified = c.name + "." + p.name;
            auto name = object_name(p.name, "property", qualified);
            if (name == "ID") {
                name = "ID_";
                out_.losses.add("property", qualified, LossReason::Renamed, Severity::Warning,
                                "ID is the surrogate key; column named ID_");
            }
            Column col{name, ColumnType::Text, !p.is_id, std::nullopt, qualified};
            if (const auto* e = std::get_if<EnumRef>(&p.type)) {
                std::string list;
                for (const auto& l : model_.find_enumeration(e->name)->literals) {
                    list += (list.empty() ? "" : ", ") + quote_literal(l);
                }
                t.checks.push_back({constraint("CK", t.name, name), name + " IN (" + list + ")"});
                out_.losses.add("property", qualified, LossReason::EnumAsText, Severity::Info,
                                "enumeration " + e->name + " stored as text with a membership check");
            } else {
                switch (std::get<Primitive>(p.type)) {
                    case Primitive::Str: col.type = ColumnType::Text; break;
                    case Primitive::Int: col.type = ColumnType::Integer; break;
                    case Primitive::Float: col.type = ColumnType::Decimal; break;
                    case Primitive::Bool:
                        col.type = ColumnType::Boolean;
                        t.checks.push_back({constraint("CK", t.name, name), name + " IN (0, 1)"});
                        break;
                    case Primitive::Date: col.type = ColumnType::Date; break;
                    case Primitive::DateTime: col.type = ColumnType::Timestamp; break;
                    case Primitive::Time:
                        col.type = ColumnType::TimeText;
                        out_.losses.add("property", qualified, LossReason::TypeCoerced, Severity::Warning,
                                        "time of day stored as HH:MM:SS text");
                        break;
                    case Primitive::Binary: col.type = ColumnType::Blob; break;
                }
            }
            if (p.is_id) t.uniques.push_back({constraint("UQ", t.name, name), name});
            t.columns.push_back(std::move(col));
        }
        out_.plan.tables.push_back(std::move(t));
    }

    void reference(Table& holder, const AssociationEnd& target, const std::string& assoc, bool unique) {
        const auto column = object_name(target.role + "_ID", "association", assoc);
        holder.columns.push_back({column, ColumnType::Integer, target.multiplicity.lower == 0, std::nullopt,
                                  assoc + "." + target.role});
        holder.foreign_keys.push_back(
            {constraint("FK", holder.name, column), column, table_of_.at(target.class_name), "ID", unique});
        if (unique) holder.uniques.push_back({constraint("UQ", holder.name, column), column});
    }

    void association(const Association& a) {
        switch (a.kind()) {
            case AssociationKind::ManyToOne: {
                const bool end1_many = a.end1.multiplicity.is_many();
                const auto& many = end1_many ? a.end1 : a.end2;
                const auto& one = end1_many ? a.end2 : a.end1;
                reference(table(many.class_name), one, a.name, false);
                break;
            }
            case AssociationKind::OneToOne: {
                const bool end1_holds = a.end1.class_name <= a.end2.class_name;
                const auto& holder = end1_holds ? a.end1 : a.end2;
                const auto& other = end1_holds ? a.end2 : a.end1;
                reference(table(holder.class_name), other, a.name, true);
                break;
            }
            case AssociationKind::ManyToMany: junction(a); break;
        }
    }

    void junction(const Association& a) {
        const auto& t1 = table_of_.at(a.end1.class_name);
        const auto& t2 = table_of_.at(a.end2.class_name);
        std::string name = sql_name(t1 + "_" + t2);
        if (table_origin_.count(name) || apex::is_reserved_word(name)) {
            name = object_name(a.name, "association", a.name);
            out_.losses.add("association", a.name, LossReason::Renamed, Severity::Info,
                            "junction table named after the association: " + name);
        }
        claim_table(name, "association " + a.name);

        Table t;
        t.name = name;
        t.origin = Table::Origin::Junction;
        t.identity = false;
        const bool self = a.is_self();
        for (const auto* end : {&a.end1, &a.end2}) {
            const auto column = object_name((self ? end->role : upper_snake(end->class_name)) + "_ID", "association", a.name);
            t.columns.push_back({column, ColumnType::Integer, false, std::nullopt, a.name + "." + end->role});
            t.foreign_keys.push_back({constraint("FK", name, column), column, table_of_.at(end->class_name), "ID", false});
            t.primary_key.push_back(column);
        }
        t.primary_key_name = constraint("PK", name);
        out_.plan.tables.push_back(std::move(t));
    }

    void check_columns(const Table& t) const {
        std::map<std::string, std::string> seen;
        for (const auto& c : t.columns) {
            auto [it, fresh] = seen.emplace(c.name, c.source);
            if (!fresh) {
                throw Error(ErrorCode::NameCollision, it->second + " and " + c.source + " both map to column " + t.name +
                                                          "." + c.name);
            }
        }
    }

    const DomainModel& model_;
    PlanResult out_;
    std::map<std::string, std::string> table_of_;      // class -> table
    std::map<std::string, std::string> table_origin_;  // table -> element description
    std::set<std::string> constraints_;
};

}  // namespace

std::string sql_name(std::string_view name) {
    auto upper = upper_snake(name);
    if (upper.empty()) upper = "X";
    if (!std::isalpha(static_cast<unsigned char>(upper[0]))) upper = "X_" + upper;
    if (upper.size() <= kMaxName) return upper;
    return upper.substr(0, 24) + short_hash(upper, 6);
}

bool is_reserved_word(std::string_view upper_name) {
    return std::find(kReserved.begin(), kReserved.end(), upper_name) != kReserved.end();
}

const Column* Table::find_column(std::string_view n) const {
    for (const auto& c : columns) {
        if (c.name == n) return &c;
    }
    return nullptr;
}

const Table* RelationalSchemaPlan::find_table(std::string_view n) const {
    for (const auto& t : tables) {
        if (t.name == n) return &t;
    }
    return nullptr;
}

PlanResult plan_relational(const DomainModel& model) {
    require_valid(model);
    return Planner(model).run();
}

}  // namespace lcpbridge::apex
