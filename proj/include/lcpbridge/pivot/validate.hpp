#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lcpbridge/error.hpp"
#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::pivot {

/// Well-formedness rules. Rule identifiers are stable and appear verbatim
/// in diagnostics.
enum class Rule {
    InvalidIdentifier,
    ReservedName,
    DuplicateClassName,
    DuplicateEnumName,
    EnumClassClash,
    DuplicatePropertyName,
    MultipleId,
    UnknownEnumeration,
    EmptyEnumeration,
    DuplicateLiteral,
    DuplicateAssociationName,
    DanglingEnd,
    SelfAssociationRoles,
    InvalidMultiplicity,
    DanglingGeneralization,
    SelfGeneralization,
    MultipleGenerals,
    GeneralizationCycle,
};

std::string_view to_string(Rule rule);

struct Violation {
    Rule rule;
    std::string element;  ///< name of the offending element
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(Rule rule) const;
    /// One violation per line, `RULE element: message`.
    std::string describe() const;
};

ValidationResult validate_model(const DomainModel& model);

/// Throws Error(ValidationFailed) listing every violation.
void require_valid(const DomainModel& model);

}  // namespace lcpbridge::pivot
