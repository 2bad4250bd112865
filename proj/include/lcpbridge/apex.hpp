#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcpbridge/loss_report.hpp"
#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::apex {

enum class Dialect { Oracle, Ansi };

/// Dialect-neutral column types; emit_sql spells them per dialect.
enum class ColumnType { Key, Text, Integer, Decimal, Boolean, Date, Timestamp, TimeText, Blob };

struct Column {
    std::string name;
    ColumnType type = ColumnType::Text;
    bool nullable = true;
    std::optional<std::string> default_value;
    std::string source;  ///< pivot element the column came from
};

struct ForeignKey {
    std::string name;  ///< constraint name
    std::string column;
    std::string ref_table;
    std::string ref_column = "ID";
    bool unique = false;  ///< one-to-one: the column also carries a UNIQUE constraint
};

struct NamedConstraint {
    std::string name;
    std::string body;  ///< CHECK expression or UNIQUE column list
};

struct Table {
    enum class Origin { Class, Junction };
    std::string name;
    Origin origin = Origin::Class;
    std::vector<Column> columns;
    std::string primary_key_name;
    std::vector<std::string> primary_key;
    std::vector<ForeignKey> foreign_keys;
    std::vector<NamedConstraint> checks;
    std::vector<NamedConstraint> uniques;
    /// Whether the surrogate key is generated here (false for subclass tables
    /// whose key comes from the parent).
    bool identity = true;

    const Column* find_column(std::string_view name) const;
};

struct RelationalSchemaPlan {
    std::string model_name;
    std::vector<Table> tables;

    const Table* find_table(std::string_view name) const;
};

struct PlanResult {
    RelationalSchemaPlan plan;
    LossReport losses;
};

/// Class-table mapping: a table per class keyed by surrogate ID, FK columns
/// for many-to-one and one-to-one ends, junction tables for many-to-many,
/// and subclass keys referencing the parent key. Throws NameCollision when
/// two elements map to the same table, column or constraint name.
PlanResult plan_relational(const pivot::DomainModel& model);

/// DDL script. Oracle: CREATE TABLEs in dependency order, then one ALTER
/// TABLE ... ADD CONSTRAINT per foreign key. Ansi: foreign keys are declared
/// inside CREATE TABLE (engines such as SQLite cannot add them later).
std::string emit_sql(const RelationalSchemaPlan& plan, Dialect dialect = Dialect::Oracle);

/// Tables in creation order: referenced tables first, junctions last; a
/// cycle is broken at the earliest table in plan order.
std::vector<const Table*> creation_order(const RelationalSchemaPlan& plan);

/// Upper-snake identifier of at most 30 characters: longer names keep their
/// first 24 characters followed by a 6-digit hash.
std::string sql_name(std::string_view name);

bool is_reserved_word(std::string_view upper_name);

}  // namespace lcpbridge::apex
