#include <gtest/gtest.h>

#include <random>

#include "lcpbridge/pivot/dsl.hpp"
#include "lcpbridge/pivot/equal.hpp"
#include "lcpbridge/pivot/validate.hpp"
#include "lcpbridge/plantuml.hpp"
#include "random_model.hpp"

using namespace lcpbridge;
using namespace lcpbridge::pivot;
using lcpbridge::plantuml::emit_plantuml;
using lcpbridge::plantuml::parse_plantuml;

TEST(PlantUml, EmptyBlock) {
    auto r = parse_plantuml("@startuml\n@enduml");
    EXPECT_TRUE(r.model.classes.empty());
    EXPECT_TRUE(r.skipped.empty());
    EXPECT_EQ(r.model.name, "Model");
}

TEST(PlantUml, InlineClassBody) {
    auto r = parse_plantuml("@startuml\nclass Book { title : str }\n@enduml");
    ASSERT_EQ(r.model.classes.size(), 1u);
    const auto& book = r.model.classes[0];
    EXPECT_EQ(book.name, "Book");
    ASSERT_EQ(book.properties.size(), 1u);
    EXPECT_EQ(book.properties[0], (Property{"title", Primitive::Str, false}));
    r.model.name = "M";
    EXPECT_EQ(print_pivot_text(r.model), "model M\n\nclass Book {\n  title : str\n}\n");
}

TEST(PlantUml, RelationshipAutoDeclaresClasses) {
    auto r = parse_plantuml("@startuml\nBook \"0..*\" -- \"1\" Library\n@enduml");
    ASSERT_EQ(r.model.classes.size(), 2u);
    EXPECT_TRUE(r.model.find_class("Book")->properties.empty());
    EXPECT_TRUE(r.model.find_class("Library")->properties.empty());
    ASSERT_EQ(r.model.associations.size(), 1u);
    const auto& a = r.model.associations[0];
    EXPECT_EQ(a.end1.class_name, "Book");
    EXPECT_EQ(a.end1.multiplicity, (Multiplicity{0, std::nullopt}));
    EXPECT_EQ(a.end2.class_name, "Library");
    EXPECT_EQ(a.end2.multiplicity, (Multiplicity{1, 1}));
    EXPECT_FALSE(a.end1.navigable);
    EXPECT_FALSE(a.end2.navigable);
}

TEST(PlantUml, MultiplicityTokens) {
    using plantuml::parse_multiplicity;
    // Brute force over every token the table names.
    const std::vector<std::pair<std::string, Multiplicity>> table = {
        {"1", {1, 1}}, {"0..1", {0, 1}}, {"*", Multiplicity::many()}, {"0..*", Multiplicity::many()},
        {"1..*", Multiplicity::one_or_more()}, {"2..5", {2, 5}},
    };
    for (const auto& [token, expected] : table) EXPECT_EQ(parse_multiplicity(token), expected) << token;
    for (const char* bad : {"", "0", "3..1", "1..", "..2", "a", "1...2", "*..1"}) {
        try {
            parse_multiplicity(bad);
            ADD_FAILURE() << "accepted " << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::MalformedMultiplicity) << bad;
        }
    }
    EXPECT_EQ(plantuml::parse_end_label("").multiplicity, Multiplicity::many());
    auto label = plantuml::parse_end_label("books 1..*");
    EXPECT_EQ(label.role, "books");
    EXPECT_EQ(label.multiplicity, Multiplicity::one_or_more());
}

TEST(PlantUml, MalformedMultiplicityInRelation) {
    try {
        parse_plantuml("@startuml\nA \"3..1\" -- \"1\" B\n@enduml");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedMultiplicity);
    }
}

TEST(PlantUml, MarkerErrors) {
    try {
        parse_plantuml("class A");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingMarkers);
    }
    try {
        parse_plantuml("@startuml\n@enduml\n@startuml\n@enduml\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MultipleBlocks);
    }
    try {
        parse_plantuml("@startuml\n\"\" -- B\n@enduml");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyName);
    }
}

TEST(PlantUml, DuplicateDeclarationsAreReportedAsLosses) {
    auto r = parse_plantuml("@startuml\nenum Genre {\n  A\n}\nenum Genre {\n  B\n}\n"
                            "class Book {\n  a : String\n  a : Integer\n}\n@enduml\n");
    EXPECT_EQ(r.skipped.size(), 2u);
    EXPECT_EQ(r.losses.count(LossReason::Dropped), 2u);
    EXPECT_EQ(r.model.find_class("Book")->properties.size(), 1u);
}

TEST(PlantUml, SkipListCountsUnsupportedLines) {
    const char* text = R"(@startuml Library
skinparam classAttributeIconSize 0
' a comment
title Library model
note "free note" as N1
note top of Book
  spans two lines
end note
class Book {
  +title : String
  -pages : Integer
  +getTitle() : String
  --
  isbn : String {id}
}
enum Genre {
  FICTION
  SCIENCE
}
Book "0..*" --> "1" Library : shelvedIn
Library .. Book
hide empty members
@enduml)";
    auto r = parse_plantuml(text);
    // skinparam, comment, title, note (1 line), note block (3 lines), method,
    // separator, dotted relation, hide => 11 lines.
    EXPECT_EQ(r.skipped.size(), 11u);
    EXPECT_EQ(r.model.name, "Library");
    const auto* book = r.model.find_class("Book");
    ASSERT_NE(book, nullptr);
    // Parsing never fabricates properties: three attribute lines, three properties.
    ASSERT_EQ(book->properties.size(), 3u);
    EXPECT_EQ(book->find_property("pages")->type, TypeRef{Primitive::Int});
    EXPECT_TRUE(book->find_property("isbn")->is_id);
    ASSERT_EQ(r.model.associations.size(), 1u);
    EXPECT_EQ(r.model.associations[0].name, "shelvedIn");
    EXPECT_TRUE(r.model.associations[0].end2.navigable);
    EXPECT_FALSE(r.model.associations[0].end1.navigable);
    EXPECT_EQ(r.model.enumerations.size(), 1u);
}

TEST(PlantUml, TypeTable) {
    const char* text = R"(@startuml
class T {
  a : string
  b : String
  c : text
  d : int
  e : Integer
  f : float
  g : double
  h : decimal
  i : bool
  j : boolean
  k : date
  l : datetime
  m : timestamp
  n : Money
  o
  String p
}
@enduml)";
    auto r = parse_plantuml(text);
    const auto& t = r.model.classes.at(0);
    auto type_of = [&](const char* n) { return t.find_property(n)->type; };
    for (const char* n : {"a", "b", "c", "n", "o", "p"}) EXPECT_EQ(type_of(n), TypeRef{Primitive::Str}) << n;
    for (const char* n : {"d", "e"}) EXPECT_EQ(type_of(n), TypeRef{Primitive::Int}) << n;
    for (const char* n : {"f", "g", "h"}) EXPECT_EQ(type_of(n), TypeRef{Primitive::Float}) << n;
    for (const char* n : {"i", "j"}) EXPECT_EQ(type_of(n), TypeRef{Primitive::Bool}) << n;
    EXPECT_EQ(type_of("k"), TypeRef{Primitive::Date});
    for (const char* n : {"l", "m"}) EXPECT_EQ(type_of(n), TypeRef{Primitive::DateTime}) << n;
    EXPECT_EQ(r.losses.count(LossReason::TypeCoerced), 1u);
    EXPECT_EQ(r.losses.count(LossReason::TypeDefaulted), 1u);
}

TEST(PlantUml, GeneralizationArrows) {
    auto r = parse_plantuml("@startuml\nPerson <|-- Author\nEditor --|> Person\n@enduml");
    ASSERT_EQ(r.model.generalizations.size(), 2u);
    EXPECT_EQ(r.model.generalizations[0], (Generalization{"Person", "Author"}));
    EXPECT_EQ(r.model.generalizations[1], (Generalization{"Person", "Editor"}));
}

TEST(PlantUml, CyclicGeneralizationIsDroppedNotFatal) {
    auto r = parse_plantuml("@startuml\nA <|-- B\nB <|-- A\n@enduml");
    EXPECT_EQ(r.model.generalizations.size(), 1u);
    EXPECT_TRUE(r.losses.contains(LossReason::Dropped));
}

TEST(PlantUml, NamesAreSanitized) {
    auto r = parse_plantuml("@startuml\nclass \"Order Line\" {\n  unit price : float\n}\n@enduml");
    ASSERT_EQ(r.model.classes.size(), 1u);
    EXPECT_EQ(r.model.classes[0].name, "Order_Line");
    EXPECT_TRUE(r.losses.contains(LossReason::Renamed));
}

TEST(PlantUml, SelfAssociationGetsDistinctRoles) {
    auto r = parse_plantuml("@startuml\nPerson \"*\" -- \"*\" Person\n@enduml");
    ASSERT_EQ(r.model.associations.size(), 1u);
    EXPECT_NE(r.model.associations[0].end1.role, r.model.associations[0].end2.role);
}

TEST(PlantUml, EmitEmptyModel) {
    EXPECT_EQ(emit_plantuml(DomainModel{"M", {}, {}, {}, {}}), "@startuml M\n@enduml\n");
}

TEST(PlantUml, EmitGeneralization) {
    DomainModel m{"M", {{"Person", {}}, {"Author", {}}}, {}, {{"Person", "Author"}}, {}};
    EXPECT_NE(emit_plantuml(m).find("Person <|-- Author"), std::string::npos);
}

TEST(PlantUmlProperty, RoundTripOnRandomModels) {
    std::mt19937 rng(99);
    for (int i = 0; i < 300; ++i) {
        const auto m = fixtures::random_model(rng);
        const auto text = emit_plantuml(m);
        const auto r = parse_plantuml(text, m.name);
        ASSERT_TRUE(model_equal(m, r.model)) << text;
        ASSERT_TRUE(r.skipped.empty());
        ASSERT_TRUE(r.losses.empty()) << r.losses.summary();
        ASSERT_EQ(emit_plantuml(m), text);
    }
}
