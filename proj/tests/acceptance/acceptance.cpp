// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Oracles are restated here rather than shared with the library.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcpbridge/apex.hpp"
#include "lcpbridge/capabilities.hpp"
#include "lcpbridge/error.hpp"
#include "lcpbridge/llm.hpp"
#include "lcpbridge/mendix.hpp"
#include "lcpbridge/orchestrator.hpp"
#include "lcpbridge/pivot/dsl.hpp"
#include "lcpbridge/pivot/equal.hpp"
#include "lcpbridge/pivot/validate.hpp"
#include "lcpbridge/plantuml.hpp"
#include "lcpbridge/spreadsheet.hpp"
#include "random_mendix.hpp"
#include "random_model.hpp"
#include "sql_engine.hpp"

using namespace lcpbridge;
using namespace lcpbridge::pivot;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = LCPB_FIXTURES;

struct Failure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure{message};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("lcpb-accept-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

bool many(const Multiplicity& m) { return !m.upper || *m.upper > 1; }

struct AssociationCounts {
    std::size_t m2m = 0, m2o = 0, o2o = 0;
};

AssociationCounts count_associations(const DomainModel& m) {
    AssociationCounts n;
    for (const auto& a : m.associations) {
        const bool a1 = many(a.end1.multiplicity), a2 = many(a.end2.multiplicity);
        (a1 && a2 ? n.m2m : (a1 || a2) ? n.m2o : n.o2o)++;
    }
    return n;
}

// 1. Capability rows transcribed by hand.
void capability_golden() {
    struct Row {
        const char* id;
        const char* ex;  // data gui behavior
        bool ex_third;
        std::vector<std::string> ex_formats;
        const char* im;
        bool im_third;
        std::vector<std::string> im_formats;
    };
    const std::vector<Row> rows = {
        {"mendix", "full full full", false, {"JSON"}, "partial none none", false, {"XLSX"}},
        {"outsystems", "full none none", true, {"XLSX"}, "partial none none", false, {"XLSX"}},
        {"powerapps", "partial full full", false, {"CSV", "JSON"}, "partial full full", false, {"CSV", "JSON"}},
        {"appian", "full full full", false, {"XML"}, "full full full", false, {"XML"}},
        {"servicenow", "full full full", true, {"XML"}, "full full full", true, {"XML"}},
        {"salesforce", "full none none", true, {"XLSX"}, "partial none none", false, {"XLSX"}},
        {"pegasystems", "full none none", false, {"XLSX"}, "partial none none", false, {"XLSX"}},
        {"zoho", "full full full", false, {"DS"}, "full full full", false, {"XLSX", "DS"}},
        {"retool", "partial full full", false, {"CSV", "JSON"}, "partial full full", false, {"CSV", "JSON"}},
        {"apex", "full full full", false, {"SQL"}, "full full full", false, {"SQL"}},
    };
    using orchestrator::Direction;
    const auto& matrix = orchestrator::CapabilityMatrix::builtin();
    require(matrix.platforms().size() == rows.size(), "platform count");
    const auto levels = [](const orchestrator::CapabilityRecord& r) {
        return std::string(to_string(r.data)) + " " + std::string(to_string(r.gui)) + " " +
               std::string(to_string(r.behavior));
    };
    std::size_t matched = 0;
    for (const auto& row : rows) {
        const auto& ex = matrix.query(row.id, Direction::Export);
        const auto& im = matrix.query(row.id, Direction::Import);
        require(levels(ex) == row.ex && ex.third_party == row.ex_third && ex.formats == row.ex_formats,
                std::string(row.id) + " export");
        require(levels(im) == row.im && im.third_party == row.im_third && im.formats == row.im_formats,
                std::string(row.id) + " import");
        matched += 2;
    }
    require(matched == 20, "row count");
}

// 2. Both textual forms round-trip.
void pivot_round_trip() {
    std::mt19937 rng(7001);
    for (int i = 0; i < 250; ++i) {
        const auto m = fixtures::random_model(rng);
        const auto text = print_pivot_text(m);
        require(model_equal(parse_pivot_text(text), m), "pivot text round trip, model " + std::to_string(i));
        const auto puml = plantuml::emit_plantuml(m);
        const auto back = plantuml::parse_plantuml(puml, m.name);
        require(model_equal(back.model, m), "PlantUML round trip, model " + std::to_string(i));
        require(back.losses.empty() && back.skipped.empty(), "PlantUML round trip reported losses");
    }
}

// 3. Fixture counts and conservation on random exports.
void mendix_mapping() {
    const auto r = mendix::mendix_to_pivot(mendix::parse_mendix_export(read_file(kFixtures / "library.mendix.json")));
    require(r.model.classes.size() == 3, "fixture class count");
    require(r.model.enumerations.size() == 1, "fixture enumeration count");
    require(r.model.associations.size() == 2, "fixture association count");
    std::map<std::string, std::pair<std::string, std::string>> ends;
    for (const auto& a : r.model.associations) {
        ends[a.name] = {to_string(a.end1.multiplicity), to_string(a.end2.multiplicity)};
    }
    // Reference/Default: child 0..* to parent 0..1; ReferenceSet/Default: 0..* both ways.
    require(ends["Book_Library"] == std::pair<std::string, std::string>{"0..*", "0..1"}, "Reference multiplicities");
    require(ends["Book_Author"] == std::pair<std::string, std::string>{"0..*", "0..*"}, "ReferenceSet multiplicities");

    std::mt19937 rng(7003);
    for (int i = 0; i < 100; ++i) {
        const auto doc = fixtures::random_mendix_export(rng);
        const auto out = mendix::mendix_to_pivot(mendix::read_mendix_export(doc));
        const auto& dm = doc.at("domainModel");
        std::size_t with_general = 0;
        for (const auto& e : dm.at("entities")) with_general += e.contains("generalization");
        require(validate_model(out.model).ok(), "random export " + std::to_string(i) + " invalid");
        require(out.model.classes.size() == dm.at("entities").size() &&
                    out.model.associations.size() == dm.at("associations").size() &&
                    out.model.enumerations.size() == dm.at("enumerations").size() &&
                    out.model.generalizations.size() == with_general,
                "element counts differ on random export " + std::to_string(i));
    }
}

bool literal_fits(const std::string& literal, const std::string& fmt) {
    namespace f = spreadsheet::format;
    if (fmt == f::kInteger) return std::regex_match(literal, std::regex(R"(-?\d+)"));
    if (fmt == f::kDecimal) return std::regex_match(literal, std::regex(R"(-?\d+(\.\d+)?)"));
    if (fmt == f::kBoolean) return literal == "TRUE" || literal == "FALSE";
    if (fmt == f::kDate) return std::regex_match(literal, std::regex(R"(\d\d/\d\d/\d{4})"));
    if (fmt == f::kDateTime) return std::regex_match(literal, std::regex(R"(\d\d/\d\d/\d{4} \d\d:\d\d)"));
    if (fmt == f::kTime) return std::regex_match(literal, std::regex(R"(\d\d:\d\d:\d\d)"));
    return fmt == f::kGeneral;
}

// 4. Sheet per class, bridge per many-to-many, dropdown per reference,
// date format, sample row that fits every column.
void spreadsheet_rules() {
    using spreadsheet::SheetKind;
    using Kind = spreadsheet::Validation::Kind;
    std::mt19937 rng(7004);
    for (int i = 0; i < 100; ++i) {
        const auto m = fixtures::random_model(rng);
        const auto wm = spreadsheet::plan_workbook(m).manifest;
        const auto n = count_associations(m);
        std::size_t class_sheets = 0, bridges = 0, dropdowns = 0;
        for (const auto& s : wm.sheets) {
            (s.kind == SheetKind::Class ? class_sheets : bridges)++;
            for (const auto& c : s.columns) dropdowns += c.validation.kind == Kind::Dropdown;
        }
        const auto where = " (model " + std::to_string(i) + ")";
        require(class_sheets == m.classes.size(), "class sheet count" + where);
        require(bridges == n.m2m, "bridge sheet count" + where);
        require(dropdowns == n.m2o + n.o2o + 2 * n.m2m, "dropdown count" + where);
        for (const auto& c : m.classes) {
            const auto* s = wm.find_sheet(c.name);
            require(s != nullptr, "missing sheet " + c.name + where);
            for (const auto& col : s->columns) {
                const auto* p = c.find_property(col.header);
                if (p && p->type == TypeRef{Primitive::Date}) {
                    require(col.cell_format == "DD/MM/YYYY", "date format " + c.name + where);
                }
            }
        }
        for (const auto& s : wm.sheets) {
            require(s.sample_row && s.sample_row->size() == s.columns.size(), "sample row " + s.name + where);
            for (std::size_t k = 0; k < s.columns.size(); ++k) {
                require(literal_fits((*s.sample_row)[k], s.columns[k].cell_format),
                        "sample value " + s.name + "." + s.columns[k].header + where);
            }
        }
    }
}

// 5. ANSI DDL runs on SQLite with the expected table and key counts.
void sql_oracle() {
    std::mt19937 rng(7005);
    for (int i = 0; i < 100; ++i) {
        const auto m = fixtures::random_model(rng);
        const auto n = count_associations(m);
        const auto sql = apex::emit_sql(apex::plan_relational(m).plan, apex::Dialect::Ansi);
        fixtures::Engine engine;
        const auto err = engine.exec(sql);
        const auto where = " (model " + std::to_string(i) + ")";
        require(err.empty(), "engine rejected DDL: " + err + where);
        const auto schema = engine.schema();
        std::size_t fks = 0;
        for (const auto& [name, t] : schema) fks += t.foreign_keys.size();
        require(schema.size() == m.classes.size() + n.m2m, "table count" + where);
        require(fks == n.m2o + n.o2o + 2 * n.m2m + m.generalizations.size(), "foreign key count" + where);
    }
}

// 6. Partial preservation, identity and PARTIAL_WINS.
void merge_laws() {
    std::mt19937 rng(7006);
    const DomainModel empty{"M", {}, {}, {}, {}};
    for (int i = 0; i < 200; ++i) {
        const auto pair = fixtures::random_merge_pair(rng);
        const auto& partial = pair.partial;
        const auto& inferred = pair.inferred;
        const auto where = " (pair " + std::to_string(i) + ")";
        const auto r = llm::merge_models(partial, inferred);
        require(validate_model(r.model).ok(), "merged model invalid" + where);

        for (const auto& c : partial.classes) {
            const auto* w = r.model.find_class(c.name);
            require(w != nullptr, "lost class " + c.name + where);
            for (const auto& p : c.properties) {
                const auto* q = w->find_property(p.name);
                require(q && *q == p, "changed property " + c.name + "." + p.name + where);
            }
        }
        for (const auto& a : partial.associations) {
            const auto* w = r.model.find_association(a.name);
            require(w && *w == a, "changed association " + a.name + where);
        }
        for (const auto& e : partial.enumerations) {
            const auto* w = r.model.find_enumeration(e.name);
            require(w && *w == e, "changed enumeration " + e.name + where);
        }

        std::set<std::string> expected;
        for (const auto& c : partial.classes) {
            const auto* ic = inferred.find_class(c.name);
            for (const auto& p : c.properties) {
                const auto* ip = ic ? ic->find_property(p.name) : nullptr;
                if (ip && !(ip->type == p.type)) expected.insert(c.name + "." + p.name);
            }
        }
        std::set<std::string> got;
        for (const auto& c : r.report.conflicts) {
            require(c.resolution == "PARTIAL_WINS", "conflict resolution" + where);
            got.insert(c.element);
        }
        require(got == expected, "conflict set" + where);

        const auto same = llm::merge_models(partial, partial);
        require(same.model == partial && same.report.empty(), "merge with itself" + where);
        require(llm::merge_models(partial, empty).model == partial, "merge with empty" + where);

        auto only_assocs = partial;
        for (const auto& a : inferred.associations) {
            if (partial.find_class(a.end1.class_name) && partial.find_class(a.end2.class_name) &&
                !partial.find_association(a.name)) {
                only_assocs.associations.push_back(a);
            }
        }
        const auto added = llm::merge_models(partial, only_assocs);
        require(added.report.conflicts.empty() && added.report.added_classes.empty() &&
                    model_equal(added.model, only_assocs),
                "associations-only merge" + where);
    }
}

// 7. Mendix to PowerApps through the workbook.
void scenario_a() {
    const auto dir = scratch("a");
    orchestrator::ExecuteOptions opts;
    opts.out_dir = dir;
    const auto outcome = orchestrator::execute_migration(orchestrator::plan_migration("mendix", "powerapps"),
                                                         {{kFixtures / "library.mendix.json"}}, opts);
    const auto wm = spreadsheet::manifest_from_json(
        nlohmann::json::parse(read_file(dir / "model.xlsx.manifest.json")));
    std::size_t class_sheets = 0;
    std::vector<std::string> bridge_columns;
    std::vector<std::string> book_dropdowns;
    for (const auto& s : wm.sheets) {
        if (s.kind == spreadsheet::SheetKind::Class) {
            ++class_sheets;
        } else {
            for (const auto& c : s.columns) bridge_columns.push_back(c.validation.source_sheet);
        }
        if (s.name == "Book") {
            for (const auto& c : s.columns) {
                if (c.validation.kind == spreadsheet::Validation::Kind::Dropdown) {
                    book_dropdowns.push_back(c.validation.source_sheet);
                }
            }
        }
    }
    require(class_sheets == 3, "class sheet count");
    require(bridge_columns == std::vector<std::string>{"Book", "Author"}, "bridge sheet columns");
    require(book_dropdowns == std::vector<std::string>{"Library"}, "Book dropdown columns");
    const auto& items = outcome.losses.items();
    require(std::any_of(items.begin(), items.end(),
                        [](const LossItem& i) {
                            return i.reason == LossReason::AssociationsUnknown && i.severity == Severity::Warning;
                        }),
            "no ASSOCIATIONS_UNKNOWN warning");
    const auto report =
        LossReport::from_json(nlohmann::json::parse(read_file(dir / orchestrator::kLossReportFile)));
    require(report.contains(LossReason::AssociationsUnknown), "loss-report.json lacks ASSOCIATIONS_UNKNOWN");
    fs::remove_all(dir);
}

// 8. PowerApps to Apex from CSV partials, a screenshot and a replayed answer.
void scenario_b() {
    const auto dir = scratch("b");
    const auto pa = kFixtures / "powerapps";
    llm::ReplayClient client(kFixtures / "replay");
    orchestrator::MigrationInputs in{{pa / "Book.csv", pa / "Author.csv", pa / "Library.csv"}, {pa / "datamodel.png"}};
    in.llm = &client;
    orchestrator::ExecuteOptions opts;
    opts.out_dir = dir;
    opts.dialect = apex::Dialect::Ansi;
    const auto outcome = orchestrator::execute_migration(orchestrator::plan_migration("powerapps", "apex"), in, opts);

    for (const char* c : {"Book", "Author", "Library"}) {
        require(outcome.model.find_class(c) != nullptr, std::string("missing CSV class ") + c);
    }
    require(outcome.merge.has_value(), "no merge report");
    auto added = outcome.merge->added_associations;
    std::sort(added.begin(), added.end());
    require(added == std::vector<std::string>{"holds", "writes"}, "fixture associations not added");
    for (const auto& a : added) require(outcome.model.find_association(a) != nullptr, "association " + a + " missing");

    fixtures::Engine engine;
    const auto err = engine.exec(read_file(dir / "model.sql"));
    require(err.empty(), "engine rejected DDL: " + err);
    const auto schema = engine.schema();
    require(schema.size() == 4, "expected 4 tables");
    require(schema.count("BOOK") && schema.at("BOOK").foreign_keys.size() == 1, "BOOK foreign keys");
    require(schema.count("BOOK_AUTHOR") && schema.at("BOOK_AUTHOR").foreign_keys.size() == 2, "junction keys");
    fs::remove_all(dir);
}

// 9. Re-running from the persisted pivot file reproduces every byte.
void determinism() {
    const auto dir = scratch("d");
    const auto same_bytes = [](const orchestrator::MigrationOutcome& a, const orchestrator::MigrationOutcome& b,
                               const std::string& where) {
        require(a.files.size() == b.files.size(), "file count differs: " + where);
        for (std::size_t k = 0; k < a.files.size(); ++k) {
            require(a.files[k].filename() == b.files[k].filename(), "file names differ: " + where);
            require(read_file(a.files[k]) == read_file(b.files[k]), a.files[k].filename().string() + ": " + where);
        }
    };
    const auto rerun = [&](const std::string& source, const std::string& target,
                           orchestrator::MigrationInputs first_inputs, const std::string& tag) {
        const auto plan = orchestrator::plan_migration(source, target);
        orchestrator::ExecuteOptions first;
        first.out_dir = dir / (tag + "-1");
        orchestrator::execute_migration(plan, first_inputs, first);
        orchestrator::MigrationInputs from_file;
        from_file.pivot_file = first.out_dir / orchestrator::kPivotFile;
        orchestrator::ExecuteOptions a = first, b = first;
        a.out_dir = dir / (tag + "-2");
        b.out_dir = dir / (tag + "-3");
        same_bytes(orchestrator::execute_migration(plan, from_file, a),
                   orchestrator::execute_migration(plan, from_file, b), tag);
        for (const char* name : {"model.bml", "model.sql", "model.xlsx", "model.xlsx.manifest.json"}) {
            if (fs::exists(first.out_dir / name)) {
                require(read_file(first.out_dir / name) == read_file(a.out_dir / name), std::string(name) + ": " + tag);
            }
        }
    };
    rerun("mendix", "powerapps", {{kFixtures / "library.mendix.json"}}, "scenario-a");
    rerun("mendix", "apex", {{kFixtures / "library.mendix.json"}}, "mendix-apex");

    std::mt19937 rng(7009);
    for (int i = 0; i < 20; ++i) {
        const auto src = dir / ("random" + std::to_string(i) + ".bml");
        std::ofstream(src, std::ios::binary) << print_pivot_text(fixtures::random_model(rng));
        orchestrator::MigrationInputs in;
        in.pivot_file = src;
        rerun("mendix", i % 2 ? "apex" : "powerapps", in, "random" + std::to_string(i));
    }
    fs::remove_all(dir);
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> checks = {
        {"capability golden data", capability_golden},
        {"pivot round trip", pivot_round_trip},
        {"mendix mapping", mendix_mapping},
        {"spreadsheet rules", spreadsheet_rules},
        {"sql oracle", sql_oracle},
        {"merge laws", merge_laws},
        {"scenario A mendix to powerapps", scenario_a},
        {"scenario B powerapps to apex", scenario_b},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& [name, check] = checks[i];
        const auto start = std::chrono::steady_clock::now();
        std::string problem;
        try {
            check();
        } catch (const Failure& f) {
            problem = f.message;
        } catch (const Error& e) {
            problem = std::string(to_string(e.code())) + ": " + e.what();
        } catch (const std::exception& e) {
            problem = e.what();
        }
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        std::cout << (problem.empty() ? "PASS" : "FAIL") << " " << (i + 1) << " " << name << " (" << ms << " ms)";
        if (!problem.empty()) std::cout << ": " << problem;
        std::cout << "\n";
        failed += !problem.empty();
    }
    return failed == 0 ? 0 : 1;
}
