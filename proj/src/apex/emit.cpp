#include <map>
#include <set>
#include <sstream>

#include "lcpbridge/apex.hpp"

namespace lcpbridge::apex {

namespace {

std::string type_sql(ColumnType t, Dialect d) {
    const bool ora = d == Dialect::Oracle;
    switch (t) {
        case ColumnType::Key: return ora ? "NUMBER(10)" : "INTEGER";
        case ColumnType::Text: return ora ? "VARCHAR2(255)" : "VARCHAR(255)";
        case ColumnType::Integer: return ora ? "NUMBER(10)" : "INTEGER";
        case ColumnType::Decimal: return ora ? "NUMBER(18,4)" : "DECIMAL(18,4)";
        case ColumnType::Boolean: return ora ? "NUMBER(1)" : "SMALLINT";
        case ColumnType::Date: return "DATE";
        case ColumnType::Timestamp: return "TIMESTAMP";
        case ColumnType::TimeText: return ora ? "VARCHAR2(8)" : "VARCHAR(8)";
        case ColumnType::Blob: return "BLOB";
    }
    return "";
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
}

std::string fk_clause(const ForeignKey& fk) {
    return "CONSTRAINT " + fk.name + " FOREIGN KEY (" + fk.column + ") REFERENCES " + fk.ref_table + " (" +
           fk.ref_column + ")";
}

void create_table(std::ostream& out, const Table& t, Dialect d) {
    std::vector<std::string> lines;
    for (const auto& c : t.columns) {
        std::string line = c.name + " " + type_sql(c.type, d);
        if (c.type == ColumnType::Key && t.identity && d == Dialect::Oracle) {
            line += " GENERATED BY DEFAULT ON NULL AS IDENTITY";
        }
        if (c.default_value) line += " DEFAULT " + *c.default_value;
        if (!c.nullable) line += " NOT NULL";
        lines.push_back(std::move(line));
    }
    lines.push_back("CONSTRAINT " + t.primary_key_name + " PRIMARY KEY (" + join(t.primary_key) + ")");
    for (const auto& u : t.uniques) lines.push_back("CONSTRAINT " + u.name + " UNIQUE (" + u.body + ")");
    for (const auto& c : t.checks) lines.push_back("CONSTRAINT " + c.name + " CHECK (" + c.body + ")");
    if (d == Dialect::Ansi) {
        for (const auto& fk : t.foreign_keys) lines.push_back(fk_clause(fk));
    }
    if (d == Dialect::Ansi && t.identity) {
        out << "-- " << t.name << ".ID: assign from sequence " << t.name << "_SEQ or the engine's row id\n";
    }
    out << "CREATE TABLE " << t.name << " (\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out << "  " << lines[i] << (i + 1 < lines.size() ? ",\n" : "\n");
    }
    out << ");\n\n";
}

}  // namespace

std::vector<const Table*> creation_order(const RelationalSchemaPlan& plan) {
    // Kahn's algorithm, always taking the earliest ready table in plan order
    // so output is stable. Junctions go after every class table.
    std::vector<const Table*> out;
    std::vector<const Table*> pending;
    for (const auto& t : plan.tables) {
        if (t.origin == Table::Origin::Class) pending.push_back(&t);
    }
    std::set<std::string> placed;
    while (!pending.empty()) {
        auto ready = pending.end();
        for (auto it = pending.begin(); it != pending.end(); ++it) {
            bool ok = true;
            for (const auto& fk : (*it)->foreign_keys) {
                if (fk.ref_table != (*it)->name && !placed.count(fk.ref_table)) ok = false;
            }
            if (ok) {
                ready = it;
                break;
            }
        }
        if (ready == pending.end()) ready = pending.begin();  // cycle
        placed.insert((*ready)->name);
        out.push_back(*ready);
        pending.erase(ready);
    }
    for (const auto& t : plan.tables) {
        if (t.origin == Table::Origin::Junction) out.push_back(&t);
    }
    return out;
}

std::string emit_sql(const RelationalSchemaPlan& plan, Dialect dialect) {
    if (plan.tables.empty()) return "";
    const auto order = creation_order(plan);
    std::ostringstream out;
    out << "-- Schema for " << plan.model_name << " ("
        << (dialect == Dialect::Oracle ? "Oracle" : "ANSI") << " dialect)\n";
    out << "-- Tables: " << plan.tables.size() << "\n\n";
    if (dialect == Dialect::Ansi) {
        // A cycle of inline references needs the engine to defer checks.
        std::set<std::string> seen;
        for (const auto* t : order) {
            for (const auto& fk : t->foreign_keys) {
                if (fk.ref_table != t->name && !seen.count(fk.ref_table)) {
                    out << "-- " << t->name << " references " << fk.ref_table << " before it is created\n\n";
                }
            }
            seen.insert(t->name);
        }
    }
    for (const auto* t : order) create_table(out, *t, dialect);
    if (dialect == Dialect::Oracle) {
        for (const auto* t : order) {
            for (const auto& fk : t->foreign_keys) {
                out << "ALTER TABLE " << t->name << " ADD " << fk_clause(fk) << ";\n";
            }
        }
    }
    auto text = out.str();
    while (text.size() > 1 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n') text.pop_back();
    return text;
}

}  // namespace lcpbridge::apex
