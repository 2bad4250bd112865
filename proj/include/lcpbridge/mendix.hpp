#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcpbridge/loss_report.hpp"
#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::mendix {

// In-memory form of the Mendix domain-model export (docs/mendix-export.schema.json).

struct Attribute {
    std::string name;
    std::string type;  ///< Mendix type name, e.g. "String", "AutoNumber"
    std::optional<std::string> enumeration;  ///< set when type is "Enumeration"
};

struct Entity {
    std::string name;
    std::vector<Attribute> attributes;
    std::optional<std::string> generalization;  ///< parent entity name
};

enum class AssociationType { Reference, ReferenceSet };
enum class AssociationOwner { Default, Both };

struct Association {
    std::string name;
    std::string parent;
    std::string child;
    AssociationType type = AssociationType::Reference;
    AssociationOwner owner = AssociationOwner::Default;
};

struct Enumeration {
    std::string name;
    std::vector<std::string> values;
};

struct MendixExport {
    std::string name;
    std::vector<Entity> entities;
    std::vector<Association> associations;
    std::vector<Enumeration> enumerations;
    std::vector<std::string> warnings;  ///< unknown fields, one entry each
};

/// Parses the export document. Throws MalformedDocument (not JSON, wrong
/// shapes, duplicate names, bad enum values), MissingField and
/// DanglingReference.
MendixExport parse_mendix_export(std::string_view text);
MendixExport read_mendix_export(const nlohmann::json& doc);

/// Where a pivot element came from, e.g. {"class", "Book", "entities[0]"}.
struct Provenance {
    std::string element_kind;
    std::string element_name;
    std::string source;
};

struct ImportResult {
    pivot::DomainModel model;
    LossReport losses;
    std::vector<Provenance> provenance;
};

ImportResult mendix_to_pivot(const MendixExport& source);

/// Multiplicities for the (child, parent) ends of an association.
std::pair<pivot::Multiplicity, pivot::Multiplicity> end_multiplicities(AssociationType type,
                                                                       AssociationOwner owner);

}  // namespace lcpbridge::mendix
