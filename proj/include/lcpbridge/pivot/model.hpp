#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lcpbridge::pivot {

/// Canonical primitive set every platform adapter maps into.
enum class Primitive { Str, Int, Float, Bool, Date, DateTime, Time, Binary };

inline constexpr Primitive kAllPrimitives[] = {
    Primitive::Str,  Primitive::Int,      Primitive::Float, Primitive::Bool,
    Primitive::Date, Primitive::DateTime, Primitive::Time,  Primitive::Binary,
};

std::string_view to_string(Primitive p);
std::optional<Primitive> primitive_from_string(std::string_view name);

struct EnumRef {
    std::string name;
    bool operator==(const EnumRef&) const = default;
};

/// Either a primitive or a reference to an Enumeration by name.
using TypeRef = std::variant<Primitive, EnumRef>;

inline bool is_enum(const TypeRef& t) { return std::holds_alternative<EnumRef>(t); }
std::string type_name(const TypeRef& t);

struct Property {
    std::string name;
    TypeRef type = Primitive::Str;
    bool is_id = false;

    bool operator==(const Property&) const = default;
};

struct Class {
    std::string name;
    std::vector<Property> properties;

    const Property* find_property(std::string_view prop_name) const;
    bool operator==(const Class&) const = default;
};

/// `upper == std::nullopt` means unbounded (`*`).
struct Multiplicity {
    std::uint32_t lower = 0;
    std::optional<std::uint32_t> upper;

    static constexpr Multiplicity many() { return {0, std::nullopt}; }
    static constexpr Multiplicity optional_one() { return {0, 1}; }
    static constexpr Multiplicity exactly_one() { return {1, 1}; }
    static constexpr Multiplicity one_or_more() { return {1, std::nullopt}; }

    bool is_many() const { return !upper || *upper > 1; }
    bool operator==(const Multiplicity&) const = default;
};

/// `lower..upper` with `*` for unbounded, e.g. "0..*", "1..1".
std::string to_string(const Multiplicity& m);

struct AssociationEnd {
    std::string role;
    std::string class_name;
    Multiplicity multiplicity = Multiplicity::many();
    bool navigable = false;

    bool operator==(const AssociationEnd&) const = default;
};

enum class AssociationKind { ManyToMany, ManyToOne, OneToOne };

struct Association {
    std::string name;
    AssociationEnd end1;
    AssociationEnd end2;

    AssociationKind kind() const;
    bool is_self() const { return end1.class_name == end2.class_name; }
    bool operator==(const Association&) const = default;
};

struct Generalization {
    std::string general;
    std::string specific;

    bool operator==(const Generalization&) const = default;
};

struct Enumeration {
    std::string name;
    std::vector<std::string> literals;

    bool operator==(const Enumeration&) const = default;
};

struct DomainModel {
    std::string name;
    std::vector<Class> classes;
    std::vector<Association> associations;
    std::vector<Generalization> generalizations;
    std::vector<Enumeration> enumerations;

    const Class* find_class(std::string_view class_name) const;
    Class* find_class(std::string_view class_name);
    const Enumeration* find_enumeration(std::string_view enum_name) const;
    const Association* find_association(std::string_view assoc_name) const;

    /// General class of `class_name`, if it has one.
    std::optional<std::string> general_of(std::string_view class_name) const;

    /// Ancestors of `class_name`, nearest first. Stops on cycles.
    std::vector<std::string> ancestors_of(std::string_view class_name) const;

    bool operator==(const DomainModel&) const = default;
};

// Identifier helpers shared by every adapter.

/// Letters, digits and underscore, starting with a letter.
bool is_identifier(std::string_view name);

/// Maps an arbitrary foreign name onto the identifier rule. Runs of
/// characters outside [A-Za-z0-9_] become a single underscore; a leading
/// non-letter gets an `x` prefix; an empty result becomes `unnamed`.
std::string sanitize_identifier(std::string_view name);

bool iequals(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

/// `Book` -> `book`, used for default role names.
std::string lower_first(std::string_view s);

}  // namespace lcpbridge::pivot
