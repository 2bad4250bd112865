#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lcpbridge/loss_report.hpp"
#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::plantuml {

// Syntax-level view of one @startuml..@enduml block. Names are raw (not yet
// sanitized) and relationship labels are unparsed.

struct AttributeDecl {
    std::string name;
    std::string type;  ///< raw type token, empty when the line had none
    bool is_id = false;
    std::size_t line = 0;
};

struct ClassDecl {
    std::string name;
    std::string extends;  ///< `class A extends B`, empty otherwise
    std::vector<AttributeDecl> attributes;
    std::size_t line = 0;
};

struct EnumDecl {
    std::string name;
    std::vector<std::string> literals;
    std::size_t line = 0;
};

struct RelationDecl {
    enum class Kind { Association, Generalization };
    Kind kind = Kind::Association;
    std::string left;
    std::string right;
    std::string left_label;   ///< quoted text next to the left class, unparsed
    std::string right_label;
    bool left_arrow = false;  ///< arrowhead at the left end
    bool right_arrow = false;
    bool aggregation = false;  ///< `*--` / `o--`, read as a plain association
    std::string name;  ///< text after `:`
    std::size_t line = 0;
};

using Element = std::variant<ClassDecl, EnumDecl, RelationDecl>;

struct SkippedLine {
    std::size_t line;
    std::string text;
    std::string reason;
};

struct PlantUmlDocument {
    std::string title;  ///< text after `@startuml`, may be empty
    std::string raw;    ///< the block including markers
    std::vector<Element> elements;
    std::vector<SkippedLine> skipped;
};

/// Every complete @startuml..@enduml block in `text`, markers included,
/// in order of appearance.
std::vector<std::string> find_blocks(std::string_view text);

/// Splits the single block in `text` into elements. Throws MissingMarkers
/// when there is no complete block and MultipleBlocks when there is more
/// than one.
PlantUmlDocument read_document(std::string_view text);

struct ParseResult {
    pivot::DomainModel model;
    std::vector<SkippedLine> skipped;  ///< the SkipList
    LossReport losses;
};

/// Converts the supported PlantUML class-diagram subset into a validated
/// pivot model. The model is named after the `@startuml <name>` title when
/// present, otherwise `default_model_name`.
ParseResult parse_plantuml(std::string_view text, std::string_view default_model_name = "Model");

/// Emits a model as PlantUML. `parse_plantuml(emit_plantuml(m), m.name)`
/// reproduces `m`.
std::string emit_plantuml(const pivot::DomainModel& model);

/// Maps a `"role 0..*"` style label to its parts. Throws
/// MalformedMultiplicity on a bad bound.
struct EndLabel {
    std::string role;  ///< empty when the label had none
    pivot::Multiplicity multiplicity;
};
EndLabel parse_end_label(std::string_view label);

/// Multiplicity token alone: `1`, `*`, `0..1`, `1..*`, `n..m`.
pivot::Multiplicity parse_multiplicity(std::string_view token);

}  // namespace lcpbridge::plantuml
