#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <set>

#include "lcpbridge/error.hpp"
#include "lcpbridge/pivot/dsl.hpp"
#include "lcpbridge/spreadsheet.hpp"
#include "lcpbridge/tabular.hpp"
#include "random_model.hpp"

using namespace lcpbridge;
using namespace lcpbridge::pivot;
using namespace lcpbridge::spreadsheet;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("lcpb_ws_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

bool satisfies(const std::string& literal, const std::string& fmt) {
    if (fmt == format::kInteger) return std::regex_match(literal, std::regex(R"(-?\d+)"));
    if (fmt == format::kDecimal) return std::regex_match(literal, std::regex(R"(-?\d+(\.\d+)?)"));
    if (fmt == format::kBoolean) return literal == "TRUE" || literal == "FALSE";
    if (fmt == format::kDate) return std::regex_match(literal, std::regex(R"(\d\d/\d\d/\d{4})"));
    if (fmt == format::kDateTime) return std::regex_match(literal, std::regex(R"(\d\d/\d\d/\d{4} \d\d:\d\d)"));
    if (fmt == format::kTime) return std::regex_match(literal, std::regex(R"(\d\d:\d\d:\d\d)"));
    return fmt == format::kGeneral;
}

std::size_t count_dropdowns(const WorkbookManifest& m) {
    std::size_t n = 0;
    for (const auto& s : m.sheets)
        for (const auto& c : s.columns) n += c.validation.kind == Validation::Kind::Dropdown;
    return n;
}

DomainModel parse(const char* text) { return parse_pivot_text(text); }

}  // namespace

TEST(PlanWorkbook, DateColumnExample) {
    auto r = plan_workbook(parse("model M\nclass Book {\n title : str\n published : date\n}\n"));
    ASSERT_EQ(r.manifest.sheets.size(), 1u);
    const auto& s = r.manifest.sheets[0];
    EXPECT_EQ(s.name, "Book");
    EXPECT_EQ(s.kind, SheetKind::Class);
    ASSERT_EQ(s.columns.size(), 2u);
    EXPECT_EQ(s.columns[0], (ColumnSpec{"title", "General", {}}));
    EXPECT_EQ(s.columns[1], (ColumnSpec{"published", "DD/MM/YYYY", {}}));
    ASSERT_TRUE(s.sample_row);
    EXPECT_EQ(*s.sample_row, (std::vector<std::string>{"Sample", "01/01/2024"}));
    EXPECT_TRUE(r.losses.contains(LossReason::AssociationsUnknown));
}

TEST(PlanWorkbook, BridgeSheet) {
    auto r = plan_workbook(parse(R"(model M
class Book { title : str }
class Author { name : str }
association Writes {
  books : Book [0..*]
  authors : Author [0..*]
}
)"));
    const auto* bridge = r.manifest.find_sheet("BOOK_AUTHOR");
    ASSERT_NE(bridge, nullptr);
    EXPECT_EQ(bridge->kind, SheetKind::Bridge);
    ASSERT_EQ(bridge->columns.size(), 2u);
    EXPECT_EQ(bridge->columns[0].header, "Book");
    EXPECT_EQ(bridge->columns[0].validation, (Validation{Validation::Kind::Dropdown, "Book", {}}));
    EXPECT_EQ(bridge->columns[1].validation, (Validation{Validation::Kind::Dropdown, "Author", {}}));
    EXPECT_EQ(*bridge->sample_row, (std::vector<std::string>{"Sample", "Sample"}));
}

TEST(PlanWorkbook, ManyToOneDropdownAndKeys) {
    auto r = plan_workbook(parse(R"(model M
class Book { title : str }
class Library { }
association Holds {
  books : Book [0..*]
  library : Library [0..1] nav
}
)"));
    const auto* lib = r.manifest.find_sheet("Library");
    ASSERT_EQ(lib->columns.size(), 1u);
    EXPECT_EQ(lib->columns[0].header, "id");
    EXPECT_TRUE(r.losses.contains(LossReason::KeySynthesized));
    const auto* book = r.manifest.find_sheet("Book");
    ASSERT_EQ(book->columns.size(), 2u);
    EXPECT_EQ(book->columns[1], (ColumnSpec{"library", "0", {Validation::Kind::Dropdown, "Library", {}}}));
    EXPECT_EQ((*book->sample_row)[1], "1");
}

TEST(PlanWorkbook, OneToOneAndGeneralization) {
    auto r = plan_workbook(parse(R"(model M
enum Kind { A, B }
class Person { name : str  code : int id }
class Zeta extends Person { kind : Kind  name : str  flag : bool }
class Alpha { x : time  y : binary }
association Pairs {
  zeta : Zeta [0..1]
  alpha : Alpha [1..1]
}
)"));
    const auto* zeta = r.manifest.find_sheet("Zeta");
    std::vector<std::string> headers;
    for (const auto& c : zeta->columns) headers.push_back(c.header);
    EXPECT_EQ(headers, (std::vector<std::string>{"code", "kind", "name", "flag"}));
    EXPECT_EQ(zeta->columns[1].validation, (Validation{Validation::Kind::List, "", {"A", "B"}}));
    EXPECT_EQ(zeta->columns[3].validation, (Validation{Validation::Kind::List, "", {"TRUE", "FALSE"}}));
    // Alpha sorts first, so it holds the dropdown.
    const auto* alpha = r.manifest.find_sheet("Alpha");
    EXPECT_EQ(alpha->columns.back(), (ColumnSpec{"zeta", "0", {Validation::Kind::Dropdown, "Zeta", {}}}));
    EXPECT_TRUE(r.losses.contains(LossReason::OneToOneAsManyToOne));
    EXPECT_TRUE(r.losses.contains(LossReason::GeneralizationFlattened));
    EXPECT_EQ(r.losses.count(LossReason::TypeCoerced), 2u);
}

TEST(PlanWorkbook, EmptyModelAndPlaceholder) {
    auto r = plan_workbook(DomainModel{"Empty", {}, {}, {}, {}});
    EXPECT_TRUE(r.manifest.sheets.empty());
    const auto path = temp_file("empty.xlsx");
    emit_workbook(r.manifest, path);
    const auto wb = xlsx::read_workbook(slurp(path));
    ASSERT_EQ(wb.sheets.size(), 1u);
    EXPECT_EQ(wb.sheets[0].name, "Sheet1");
    EXPECT_TRUE(wb.sheets[0].rows.empty());
    const auto manifest = nlohmann::json::parse(slurp(manifest_path(path)));
    EXPECT_TRUE(manifest.at("sheets").empty());
    fs::remove_all(path.parent_path());
}

TEST(PlanWorkbook, SuppressedSampleRow) {
    auto r = plan_workbook(parse("model M\nclass Book { title : str }\n"), {false});
    EXPECT_FALSE(r.manifest.sheets[0].sample_row);
    EXPECT_TRUE(r.losses.contains(LossReason::SampleRowSuppressed));
    EXPECT_EQ(render_workbook(r.manifest).sheets[0].rows.size(), 1u);
}

TEST(EmitWorkbook, DropdownValidationAndReload) {
    auto r = plan_workbook(parse(R"(model Library
class Book { title : str  published : date  pages : int }
class Author { name : str }
class Library { name : str  address : str }
association Shelved {
  books : Book [0..*]
  library : Library [0..1] nav
}
association Wrote {
  books : Book [0..*]
  authors : Author [0..*]
}
)"));
    const auto path = temp_file("library.xlsx");
    emit_workbook(r.manifest, path);
    const auto wb = xlsx::read_workbook(slurp(path));
    ASSERT_EQ(wb.sheets.size(), 4u);
    const auto& book = wb.sheets[0];
    EXPECT_EQ(book.name, "Book");
    ASSERT_EQ(book.validations.size(), 1u);
    EXPECT_EQ(book.validations[0], (xlsx::ListValidation{"D2:D1048576", "'Library'!$A$2:$A$1048576"}));
    EXPECT_EQ(book.column_formats.at(1), "DD/MM/YYYY");
    EXPECT_EQ(xlsx::cell_text(book.rows.at(1).at(1)), "01/01/2024");

    const auto src = tabular::load_tabular({path});
    ASSERT_EQ(src.tables.size(), 4u);
    std::vector<std::string> names;
    for (const auto& t : src.tables) names.push_back(t.name);
    EXPECT_EQ(names, (std::vector<std::string>{"Book", "Author", "Library", "BOOK_AUTHOR"}));
    EXPECT_EQ(src.tables[0].columns.size(), 4u);
    EXPECT_EQ(manifest_from_json(nlohmann::json::parse(slurp(manifest_path(path)))), r.manifest);
    fs::remove_all(path.parent_path());
}

TEST(Manifest, RejectsBrokenManifests) {
    WorkbookManifest m{"W", {{"A", SheetKind::Class, {{"x", "General", {Validation::Kind::Dropdown, "Nope", {}}}}, std::nullopt}}};
    EXPECT_THROW(check_manifest(m), Error);
    m.sheets[0].columns[0].validation = {};
    m.sheets[0].sample_row = std::vector<std::string>{"a", "b"};
    EXPECT_THROW(check_manifest(m), Error);
    m.sheets[0].sample_row.reset();
    m.sheets.push_back(m.sheets[0]);
    m.sheets[1].name = "a";
    EXPECT_THROW(check_manifest(m), Error);
    EXPECT_THROW(manifest_from_json(nlohmann::json{{"sheets", 1}}), Error);
}

TEST(PlanWorkbookProperty, RulesHoldOnRandomModels) {
    std::mt19937 rng(31);
    const auto dir = temp_file("x").parent_path();
    for (int i = 0; i < 100; ++i) {
        const auto m = fixtures::random_model(rng);
        const auto r = plan_workbook(m);
        const auto& wm = r.manifest;

        std::size_t m2m = 0, m2o = 0, o2o = 0;
        for (const auto& a : m.associations) {
            const bool many1 = !a.end1.multiplicity.upper || *a.end1.multiplicity.upper > 1;
            const bool many2 = !a.end2.multiplicity.upper || *a.end2.multiplicity.upper > 1;
            (many1 && many2 ? m2m : (many1 || many2) ? m2o : o2o)++;
        }
        std::size_t class_sheets = 0, bridge_sheets = 0;
        for (const auto& s : wm.sheets) (s.kind == SheetKind::Class ? class_sheets : bridge_sheets)++;
        ASSERT_EQ(class_sheets, m.classes.size());
        ASSERT_EQ(bridge_sheets, m2m);
        ASSERT_EQ(count_dropdowns(wm), m2o + o2o + 2 * bridge_sheets);

        for (const auto& c : m.classes) {
            const auto* s = wm.find_sheet(c.name);
            ASSERT_NE(s, nullptr) << c.name;
            // Expected property headers: own plus every ancestor's, by name.
            std::set<std::string> expected;
            for (std::string k = c.name;;) {
                for (const auto& p : m.find_class(k)->properties) expected.insert(p.name);
                auto g = m.general_of(k);
                if (!g) break;
                k = *g;
            }
            std::set<std::string> got;
            for (const auto& col : s->columns)
                if (col.validation.kind != Validation::Kind::Dropdown) got.insert(col.header);
            if (expected.empty()) expected.insert("id");
            ASSERT_EQ(got, expected) << c.name;
            for (const auto& col : s->columns) {
                const auto* p = c.find_property(col.header);
                if (p && p->type == TypeRef{Primitive::Date}) ASSERT_EQ(col.cell_format, "DD/MM/YYYY");
            }
        }
        for (const auto& s : wm.sheets) {
            ASSERT_TRUE(s.sample_row);
            for (std::size_t k = 0; k < s.columns.size(); ++k) {
                const auto& col = s.columns[k];
                ASSERT_TRUE(satisfies((*s.sample_row)[k], col.cell_format)) << s.name << "." << col.header;
                if (col.validation.kind == Validation::Kind::Dropdown) {
                    const auto* src = wm.find_sheet(col.validation.source_sheet);
                    ASSERT_NE(src, nullptr);
                    ASSERT_EQ((*s.sample_row)[k], src->sample_row->front());
                }
                if (col.validation.kind == Validation::Kind::List) {
                    const auto& v = col.validation.values;
                    ASSERT_NE(std::find(v.begin(), v.end(), (*s.sample_row)[k]), v.end());
                }
            }
        }

        const auto path = dir / ("m" + std::to_string(i) + ".xlsx");
        emit_workbook(wm, path);
        const auto bytes = slurp(path);
        emit_workbook(plan_workbook(m).manifest, path);
        ASSERT_EQ(slurp(path), bytes);
        ASSERT_EQ(manifest_from_json(nlohmann::json::parse(slurp(manifest_path(path)))), wm);

        // Class and property names come back through the tabular importer.
        if (!m.classes.empty()) {
            const auto inferred = tabular::infer_model(tabular::load_tabular({path})).model;
            for (const auto& c : m.classes) {
                const auto* ic = inferred.find_class(c.name);
                ASSERT_NE(ic, nullptr) << c.name;
                for (const auto& p : c.properties) ASSERT_NE(ic->find_property(p.name), nullptr) << p.name;
            }
            ASSERT_TRUE(inferred.associations.empty());
        }
    }
    fs::remove_all(dir);
}
