#include "lcpbridge/pivot/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace lcpbridge::pivot {

std::string_view to_string(Primitive p) {
    switch (p) {
        case Primitive::Str: return "str";
        case Primitive::Int: return "int";
        case Primitive::Float: return "float";
        case Primitive::Bool: return "bool";
        case Primitive::Date: return "date";
        case Primitive::DateTime: return "datetime";
        case Primitive::Time: return "time";
        case Primitive::Binary: return "binary";
    }
    return "str";
}

std::optional<Primitive> primitive_from_string(std::string_view name) {
    for (Primitive p : kAllPrimitives) {
        if (to_string(p) == name) return p;
    }
    return std::nullopt;
}

std::string type_name(const TypeRef& t) {
    if (const auto* e = std::get_if<EnumRef>(&t)) return e->name;
    return std::string(to_string(std::get<Primitive>(t)));
}

const Property* Class::find_property(std::string_view prop_name) const {
    for (const auto& p : properties) {
        if (iequals(p.name, prop_name)) return &p;
    }
    return nullptr;
}

std::string to_string(const Multiplicity& m) {
    std::string out = std::to_string(m.lower) + "..";
    out += m.upper ? std::to_string(*m.upper) : "*";
    return out;
}

AssociationKind Association::kind() const {
    const bool many1 = end1.multiplicity.is_many();
    const bool many2 = end2.multiplicity.is_many();
    if (many1 && many2) return AssociationKind::ManyToMany;
    if (many1 || many2) return AssociationKind::ManyToOne;
    return AssociationKind::OneToOne;
}

const Class* DomainModel::find_class(std::string_view class_name) const {
    for (const auto& c : classes) {
        if (iequals(c.name, class_name)) return &c;
    }
    return nullptr;
}

Class* DomainModel::find_class(std::string_view class_name) {
    for (auto& c : classes) {
        if (iequals(c.name, class_name)) return &c;
    }
    return nullptr;
}

const Enumeration* DomainModel::find_enumeration(std::string_view enum_name) const {
    for (const auto& e : enumerations) {
        if (iequals(e.name, enum_name)) return &e;
    }
    return nullptr;
}

const Association* DomainModel::find_association(std::string_view assoc_name) const {
    for (const auto& a : associations) {
        if (iequals(a.name, assoc_name)) return &a;
    }
    return nullptr;
}

std::optional<std::string> DomainModel::general_of(std::string_view class_name) const {
    for (const auto& g : generalizations) {
        if (iequals(g.specific, class_name)) return g.general;
    }
    return std::nullopt;
}

std::vector<std::string> DomainModel::ancestors_of(std::string_view class_name) const {
    std::vector<std::string> out;
    std::set<std::string> seen{to_lower(class_name)};
    auto current = general_of(class_name);
    while (current && seen.insert(to_lower(*current)).second) {
        out.push_back(*current);
        current = general_of(*current);
    }
    return out;
}

bool is_identifier(std::string_view name) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
    return std::all_of(name.begin(), name.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    });
}

std::string sanitize_identifier(std::string_view name) {
    std::string out;
    bool pending_underscore = false;
    for (char ch : name) {
        const auto uch = static_cast<unsigned char>(ch);
        if (std::isalnum(uch) || ch == '_') {
            if (pending_underscore && !out.empty()) out.push_back('_');
            pending_underscore = false;
            out.push_back(ch);
        } else {
            pending_underscore = true;
        }
    }
    if (out.empty()) return "unnamed";
    if (!std::isalpha(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), 'x');
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    return out;
}

std::string lower_first(std::string_view s) {
    std::string out(s);
    if (!out.empty()) out.front() = static_cast<char>(std::tolower(static_cast<unsigned char>(out.front())));
    return out;
}

}  // namespace lcpbridge::pivot
