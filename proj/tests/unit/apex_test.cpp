#include <gtest/gtest.h>

#include <map>
#include <random>
#include <regex>
#include <set>

#include "lcpbridge/apex.hpp"
#include "lcpbridge/error.hpp"
#include "lcpbridge/pivot/dsl.hpp"
#include "random_model.hpp"
#include "sql_engine.hpp"

using namespace lcpbridge;
using namespace lcpbridge::apex;
using namespace lcpbridge::pivot;
using lcpbridge::fixtures::Engine;
using lcpbridge::fixtures::TableInfo;

namespace {

std::map<std::string, TableInfo> run_ansi(const DomainModel& m) {
    Engine engine;
    const auto sql = emit_sql(plan_relational(m).plan, Dialect::Ansi);
    const auto err = engine.exec(sql);
    EXPECT_EQ(err, "") << sql;
    return engine.schema();
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::vector<std::string> pk_columns(const TableInfo& t) {
    std::map<int, std::string> ordered;
    for (const auto& c : t.columns) {
        if (c.pk_position > 0) ordered[c.pk_position] = c.name;
    }
    std::vector<std::string> out;
    for (const auto& [_, name] : ordered) out.push_back(name);
    return out;
}

const char* kLibrary = R"(model Library
class Book {
  title : str
}
class Library {
  name : str
}
class Author {
  name : str
}
association holds {
  book : Book [0..*]
  library : Library [0..1]
}
association writes {
  book : Book [0..*]
  author : Author [0..*]
}
)";

}  // namespace

TEST(ApexPlan, SingleClassTable) {
    const auto schema = run_ansi(parse_pivot_text("model M\nclass Book {\n  title : str\n}\n"));
    ASSERT_EQ(schema.size(), 1u);
    const auto& book = schema.at("BOOK");
    ASSERT_EQ(book.columns.size(), 2u);
    EXPECT_EQ(book.columns[0].name, "ID");
    EXPECT_EQ(book.columns[1].name, "TITLE");
    EXPECT_EQ(pk_columns(book), std::vector<std::string>{"ID"});
    EXPECT_TRUE(book.foreign_keys.empty());
}

TEST(ApexPlan, ManyToOneIsNullableForeignKey) {
    const auto schema = run_ansi(parse_pivot_text(kLibrary));
    const auto& book = schema.at("BOOK");
    const auto* fk = book.column("LIBRARY_ID");
    ASSERT_NE(fk, nullptr);
    EXPECT_FALSE(fk->not_null);
    ASSERT_EQ(book.foreign_keys.size(), 1u);
    EXPECT_EQ(book.foreign_keys[0].from, "LIBRARY_ID");
    EXPECT_EQ(book.foreign_keys[0].table, "LIBRARY");
    EXPECT_EQ(book.foreign_keys[0].to, "ID");
}

TEST(ApexPlan, MandatoryReferenceIsNotNull) {
    const auto schema = run_ansi(parse_pivot_text(
        "model M\nclass Book {}\nclass Library {}\nassociation a {\n  book : Book [0..*]\n  library : Library [1..1]\n}\n"));
    EXPECT_TRUE(schema.at("BOOK").column("LIBRARY_ID")->not_null);
}

TEST(ApexPlan, ManyToManyJunction) {
    const auto schema = run_ansi(parse_pivot_text(kLibrary));
    ASSERT_EQ(schema.size(), 4u);
    const auto& j = schema.at("BOOK_AUTHOR");
    EXPECT_EQ(pk_columns(j), (std::vector<std::string>{"BOOK_ID", "AUTHOR_ID"}));
    std::set<std::pair<std::string, std::string>> fks;
    for (const auto& f : j.foreign_keys) fks.insert({f.from, f.table});
    EXPECT_EQ(fks, (std::set<std::pair<std::string, std::string>>{{"BOOK_ID", "BOOK"}, {"AUTHOR_ID", "AUTHOR"}}));
}

TEST(ApexPlan, JunctionEnforcesCompositeKey) {
    Engine engine;
    ASSERT_EQ(engine.exec(emit_sql(plan_relational(parse_pivot_text(kLibrary)).plan, Dialect::Ansi)), "");
    ASSERT_EQ(engine.exec("INSERT INTO BOOK (ID, TITLE) VALUES (1, 'x'); INSERT INTO AUTHOR (ID, NAME) VALUES (1, 'y');"
                          "INSERT INTO BOOK_AUTHOR VALUES (1, 1);"),
              "");
    EXPECT_NE(engine.exec("INSERT INTO BOOK_AUTHOR VALUES (1, 1);"), "");
}

TEST(ApexPlan, OneToOneIsUniqueOnAlphabeticallyFirstClass) {
    const auto m = parse_pivot_text(
        "model M\nclass Person {}\nclass Passport {}\nassociation a {\n  owner : Person [1..1]\n  passport : Passport [0..1]\n}\n");
    Engine engine;
    ASSERT_EQ(engine.exec(emit_sql(plan_relational(m).plan, Dialect::Ansi)), "");
    const auto schema = engine.schema();
    ASSERT_EQ(schema.at("PASSPORT").foreign_keys.size(), 1u);
    EXPECT_EQ(schema.at("PASSPORT").foreign_keys[0].from, "OWNER_ID");
    EXPECT_TRUE(schema.at("PERSON").foreign_keys.empty());
    ASSERT_EQ(engine.exec("INSERT INTO PERSON (ID) VALUES (1); INSERT INTO PASSPORT (ID, OWNER_ID) VALUES (1, 1);"), "");
    EXPECT_NE(engine.exec("INSERT INTO PASSPORT (ID, OWNER_ID) VALUES (2, 1);"), "");
}

TEST(ApexPlan, GeneralizationSharesKey) {
    const auto schema = run_ansi(parse_pivot_text(
        "model M\nclass Person {\n  name : str\n}\nclass Author extends Person {\n  pen_name : str\n}\n"));
    const auto& author = schema.at("AUTHOR");
    EXPECT_EQ(pk_columns(author), std::vector<std::string>{"ID"});
    ASSERT_EQ(author.foreign_keys.size(), 1u);
    EXPECT_EQ(author.foreign_keys[0].from, "ID");
    EXPECT_EQ(author.foreign_keys[0].table, "PERSON");
}

TEST(ApexPlan, EnumAndBoolChecks) {
    const auto m = parse_pivot_text(
        "model M\nenum Genre { FICTION, SCIENCE }\nclass Book {\n  genre : Genre\n  in_stock : bool\n}\n");
    const auto r = plan_relational(m);
    EXPECT_TRUE(r.losses.contains(LossReason::EnumAsText));
    Engine engine;
    ASSERT_EQ(engine.exec(emit_sql(r.plan, Dialect::Ansi)), "");
    EXPECT_EQ(engine.exec("INSERT INTO BOOK (ID, GENRE, IN_STOCK) VALUES (1, 'FICTION', 1);"), "");
    EXPECT_EQ(engine.exec("INSERT INTO BOOK (ID, GENRE, IN_STOCK) VALUES (2, 'SCIENCE', 0);"), "");
    EXPECT_NE(engine.exec("INSERT INTO BOOK (ID, GENRE) VALUES (3, 'POETRY');"), "");
    EXPECT_NE(engine.exec("INSERT INTO BOOK (ID, IN_STOCK) VALUES (4, 2);"), "");
}

TEST(ApexPlan, TypeTable) {
    const auto m = parse_pivot_text(
        "model M\nclass T {\n  a : str\n  b : int\n  c : float\n  d : bool\n  e : date\n  f : datetime\n  g : time\n"
        "  h : binary\n  k : str id\n}\n");
    const auto r = plan_relational(m);
    const auto ora = emit_sql(r.plan, Dialect::Oracle);
    for (const char* frag : {"ID NUMBER(10) GENERATED BY DEFAULT ON NULL AS IDENTITY NOT NULL", "A VARCHAR2(255)",
                             "B NUMBER(10)", "C NUMBER(18,4)", "D NUMBER(1)", "E DATE", "F TIMESTAMP", "G VARCHAR2(8)",
                             "H BLOB", "K VARCHAR2(255) NOT NULL", "CHECK (D IN (0, 1))", "UNIQUE (K)"}) {
        EXPECT_NE(ora.find(frag), std::string::npos) << frag;
    }
    EXPECT_EQ(r.losses.count(LossReason::TypeCoerced), 1u);
    const auto schema = run_ansi(m);
    std::map<std::string, std::string> types;
    for (const auto& c : schema.at("T").columns) types[c.name] = c.type;
    EXPECT_EQ(types, (std::map<std::string, std::string>{{"ID", "INTEGER"}, {"A", "VARCHAR(255)"}, {"B", "INTEGER"},
                                                          {"C", "DECIMAL(18,4)"}, {"D", "SMALLINT"}, {"E", "DATE"},
                                                          {"F", "TIMESTAMP"}, {"G", "VARCHAR(8)"}, {"H", "BLOB"},
                                                          {"K", "VARCHAR(255)"}}));
}

TEST(ApexPlan, ReservedAndLongNames) {
    const auto m = parse_pivot_text(
        "model M\nclass Order {\n  id : str\n  date : date\n  a_property_with_an_extremely_long_name : int\n}\n");
    const auto r = plan_relational(m);
    EXPECT_EQ(r.losses.count(LossReason::Renamed), 4u) << r.losses.summary();
    const auto schema = run_ansi(m);
    const auto& t = schema.at("ORDER_");
    EXPECT_NE(t.column("ID_"), nullptr);
    EXPECT_NE(t.column("DATE_"), nullptr);
    for (const auto& [name, table] : schema) {
        EXPECT_LE(name.size(), 30u);
        for (const auto& c : table.columns) {
            EXPECT_LE(c.name.size(), 30u);
            EXPECT_TRUE(std::regex_match(c.name, std::regex("[A-Z][A-Z0-9_]*"))) << c.name;
        }
    }
}

TEST(ApexPlan, TruncationIsStable) {
    const std::string long_name = "AnExtraordinarilyLongClassNameForTesting";
    const auto a = sql_name(long_name);
    EXPECT_EQ(a.size(), 30u);
    EXPECT_EQ(a.substr(0, 24), "AN_EXTRAORDINARILY_LONG_");
    EXPECT_TRUE(std::regex_match(a.substr(24), std::regex("[0-9A-F]{6}")));
    EXPECT_EQ(sql_name(long_name), a);
    EXPECT_NE(sql_name(long_name + "2"), a);
    EXPECT_EQ(sql_name("OrderLine"), "ORDER_LINE");
}

TEST(ApexPlan, ColumnCollisionNamesBothOriginals) {
    const auto m = parse_pivot_text("model M\nclass Book {\n  orderLine : str\n  order_line : int\n}\n");
    try {
        plan_relational(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NameCollision);
        EXPECT_NE(std::string(e.what()).find("Book.orderLine"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("Book.order_line"), std::string::npos);
    }
}

TEST(ApexPlan, TableCollision) {
    const auto m = parse_pivot_text("model M\nclass OrderLine {}\nclass Order_Line {}\n");
    try {
        plan_relational(m);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NameCollision);
    }
}

TEST(ApexEmit, EmptyPlan) { EXPECT_EQ(emit_sql(RelationalSchemaPlan{}), ""); }

TEST(ApexEmit, SingleTableHasNoAlter) {
    const auto sql = emit_sql(plan_relational(parse_pivot_text("model M\nclass Book {\n  title : str\n}\n")).plan);
    EXPECT_EQ(count(sql, "CREATE TABLE"), 1u);
    EXPECT_EQ(count(sql, "ALTER TABLE"), 0u);
}

TEST(ApexEmit, OracleAddsForeignKeysAfterTables) {
    const auto sql = emit_sql(plan_relational(parse_pivot_text(kLibrary)).plan, Dialect::Oracle);
    EXPECT_EQ(count(sql, "ALTER TABLE"), 3u);
    EXPECT_GT(sql.find("ALTER TABLE"), sql.rfind("CREATE TABLE"));
    EXPECT_LT(sql.find("CREATE TABLE LIBRARY"), sql.find("CREATE TABLE BOOK ("));
    EXPECT_LT(sql.find("CREATE TABLE BOOK ("), sql.find("CREATE TABLE BOOK_AUTHOR"));
    EXPECT_EQ(sql.substr(sql.size() - 2), ";\n");
}

TEST(ApexEmit, SelfAssociationCycle) {
    const auto m = parse_pivot_text(
        "model M\nclass Employee {}\nassociation manages {\n  report : Employee [0..*]\n  manager : Employee [0..1]\n}\n");
    const auto plan = plan_relational(m).plan;
    const auto ora = emit_sql(plan, Dialect::Oracle);
    EXPECT_LT(ora.find("CREATE TABLE EMPLOYEE"), ora.find("ALTER TABLE EMPLOYEE ADD CONSTRAINT"));
    const auto schema = run_ansi(m);
    ASSERT_EQ(schema.at("EMPLOYEE").foreign_keys.size(), 1u);
    EXPECT_EQ(schema.at("EMPLOYEE").foreign_keys[0].table, "EMPLOYEE");
}

TEST(ApexEmit, DependencyOrderBreaksCycles) {
    const auto m = parse_pivot_text(
        "model M\nclass A {}\nclass B {}\nassociation x {\n  a : A [0..*]\n  b : B [1..1]\n}\nassociation y {\n"
        "  bs : B [0..*]\n  a_one : A [1..1]\n}\n");
    const auto plan = plan_relational(m).plan;
    const auto order = creation_order(plan);
    ASSERT_EQ(order.size(), 2u);
    EXPECT_EQ(order[0]->name, "A");
    EXPECT_EQ(run_ansi(m).size(), 2u);
}

TEST(ApexProperty, RandomModelsExecuteAndMatchCounts) {
    std::mt19937 rng(2024);
    for (int i = 0; i < 120; ++i) {
        const auto m = fixtures::random_model(rng);
        // Counts from the model alone.
        std::size_t m2o = 0, o2o = 0, m2m = 0;
        std::map<std::string, std::size_t> columns;
        for (const auto& c : m.classes) columns[c.name] = 1 + c.properties.size();
        for (const auto& a : m.associations) {
            const bool many1 = !a.end1.multiplicity.upper || *a.end1.multiplicity.upper > 1;
            const bool many2 = !a.end2.multiplicity.upper || *a.end2.multiplicity.upper > 1;
            if (many1 && many2) {
                ++m2m;
            } else if (many1 || many2) {
                ++m2o;
                ++columns[many1 ? a.end1.class_name : a.end2.class_name];
            } else {
                ++o2o;
                ++columns[std::min(a.end1.class_name, a.end2.class_name)];
            }
        }
        const auto sql = emit_sql(plan_relational(m).plan, Dialect::Ansi);
        ASSERT_EQ(sql, emit_sql(plan_relational(m).plan, Dialect::Ansi));
        Engine engine;
        ASSERT_EQ(engine.exec(sql), "") << sql;
        const auto schema = engine.schema();
        ASSERT_EQ(schema.size(), m.classes.size() + m2m) << sql;
        std::size_t fks = 0;
        for (const auto& [name, t] : schema) {
            fks += t.foreign_keys.size();
            for (const auto& f : t.foreign_keys) {
                ASSERT_TRUE(schema.count(f.table)) << f.table;
                ASSERT_NE(schema.at(f.table).column(f.to), nullptr);
            }
        }
        ASSERT_EQ(fks, m2o + o2o + 2 * m2m + m.generalizations.size()) << sql;
        for (const auto& c : m.classes) {
            const auto it = schema.find(sql_name(c.name));
            ASSERT_NE(it, schema.end()) << c.name;
            ASSERT_EQ(it->second.columns.size(), columns[c.name]) << c.name;
        }
        const auto ora = emit_sql(plan_relational(m).plan, Dialect::Oracle);
        ASSERT_EQ(count(ora, "ALTER TABLE"), fks);
        ASSERT_EQ(count(ora, "CREATE TABLE"), schema.size());
    }
}
