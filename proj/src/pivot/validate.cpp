#include "lcpbridge/pivot/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace lcpbridge::pivot {

std::string_view to_string(Rule rule) {
    switch (rule) {
        case Rule::InvalidIdentifier: return "INVALID_IDENTIFIER";
        case Rule::ReservedName: return "RESERVED_NAME";
        case Rule::DuplicateClassName: return "DUPLICATE_CLASS_NAME";
        case Rule::DuplicateEnumName: return "DUPLICATE_ENUM_NAME";
        case Rule::EnumClassClash: return "ENUM_CLASS_CLASH";
        case Rule::DuplicatePropertyName: return "DUPLICATE_PROPERTY_NAME";
        case Rule::MultipleId: return "MULTIPLE_ID";
        case Rule::UnknownEnumeration: return "UNKNOWN_ENUMERATION";
        case Rule::EmptyEnumeration: return "EMPTY_ENUMERATION";
        case Rule::DuplicateLiteral: return "DUPLICATE_LITERAL";
        case Rule::DuplicateAssociationName: return "DUPLICATE_ASSOCIATION_NAME";
        case Rule::DanglingEnd: return "DANGLING_END";
        case Rule::SelfAssociationRoles: return "SELF_ASSOCIATION_ROLES";
        case Rule::InvalidMultiplicity: return "INVALID_MULTIPLICITY";
        case Rule::DanglingGeneralization: return "DANGLING_GENERALIZATION";
        case Rule::SelfGeneralization: return "SELF_GENERALIZATION";
        case Rule::MultipleGenerals: return "MULTIPLE_GENERALS";
        case Rule::GeneralizationCycle: return "GENERALIZATION_CYCLE";
    }
    return "UNKNOWN_RULE";
}

bool ValidationResult::has(Rule rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [rule](const Violation& v) { return v.rule == rule; });
}

std::string ValidationResult::describe() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << to_string(v.rule) << ' ' << v.element << ": " << v.message << '\n';
    }
    return out.str();
}

namespace {

class Checker {
public:
    explicit Checker(const DomainModel& model) : model_(model) {}

    ValidationResult run() {
        identifier(model_.name, "model name");
        enumerations();
        classes();
        associations();
        generalizations();
        return std::move(result_);
    }

private:
    void add(Rule rule, std::string element, std::string message) {
        result_.violations.push_back({rule, std::move(element), std::move(message)});
    }

    void identifier(const std::string& name, std::string_view what) {
        if (!is_identifier(name)) {
            add(Rule::InvalidIdentifier, name, std::string(what) + " is not a valid identifier");
        }
    }

    void enumerations() {
        std::set<std::string> seen;
        for (const auto& e : model_.enumerations) {
            identifier(e.name, "enumeration name");
            if (primitive_from_string(e.name)) {
                add(Rule::ReservedName, e.name, "enumeration name shadows a primitive type");
            }
            if (!seen.insert(to_lower(e.name)).second) {
                add(Rule::DuplicateEnumName, e.name, "enumeration declared more than once");
            }
            if (e.literals.empty()) add(Rule::EmptyEnumeration, e.name, "enumeration has no literals");
            std::set<std::string> lits;
            for (const auto& lit : e.literals) {
                identifier(lit, "enumeration literal");
                if (!lits.insert(lit).second) {
                    add(Rule::DuplicateLiteral, e.name + "." + lit, "literal repeated");
                }
            }
        }
    }

    void classes() {
        std::set<std::string> seen;
        for (const auto& c : model_.classes) {
            identifier(c.name, "class name");
            if (!seen.insert(to_lower(c.name)).second) {
                add(Rule::DuplicateClassName, c.name, "class declared more than once");
            }
            if (model_.find_enumeration(c.name)) {
                add(Rule::EnumClassClash, c.name, "name used by both a class and an enumeration");
            }
            std::set<std::string> props;
            int ids = 0;
            for (const auto& p : c.properties) {
                const std::string qualified = c.name + "." + p.name;
                identifier(p.name, "property name");
                if (!props.insert(to_lower(p.name)).second) {
                    add(Rule::DuplicatePropertyName, qualified, "property declared more than once");
                }
                if (p.is_id) ++ids;
                if (const auto* ref = std::get_if<EnumRef>(&p.type)) {
                    if (!model_.find_enumeration(ref->name)) {
                        add(Rule::UnknownEnumeration, qualified, "type names undeclared enumeration '" + ref->name + "'");
                    }
                }
            }
            if (ids > 1) add(Rule::MultipleId, c.name, "more than one id property");
        }
    }

    void end(const Association& a, const AssociationEnd& e) {
        identifier(e.role, "association role");
        if (!model_.find_class(e.class_name)) {
            add(Rule::DanglingEnd, a.name, "end '" + e.role + "' references absent class '" + e.class_name + "'");
        }
        const auto& m = e.multiplicity;
        if ((m.upper && *m.upper == 0) || (m.upper && m.lower > *m.upper)) {
            add(Rule::InvalidMultiplicity, a.name + "." + e.role, "multiplicity " + to_string(m) + " is empty");
        }
    }

    void associations() {
        std::set<std::string> seen;
        for (const auto& a : model_.associations) {
            identifier(a.name, "association name");
            if (!seen.insert(to_lower(a.name)).second) {
                add(Rule::DuplicateAssociationName, a.name, "association declared more than once");
            }
            end(a, a.end1);
            end(a, a.end2);
            if (iequals(a.end1.class_name, a.end2.class_name) && iequals(a.end1.role, a.end2.role)) {
                add(Rule::SelfAssociationRoles, a.name, "self-association ends share role '" + a.end1.role + "'");
            }
        }
    }

    void generalizations() {
        std::map<std::string, std::string> parent;  // lowercased specific -> lowercased general
        for (const auto& g : model_.generalizations) {
            const std::string label = g.specific + "->" + g.general;
            bool dangling = false;
            for (const auto* name : {&g.general, &g.specific}) {
                if (!model_.find_class(*name)) {
                    add(Rule::DanglingGeneralization, label, "references absent class '" + *name + "'");
                    dangling = true;
                }
            }
            if (iequals(g.general, g.specific)) {
                add(Rule::SelfGeneralization, label, "class generalizes itself");
                continue;
            }
            if (dangling) continue;
            auto [it, inserted] = parent.emplace(to_lower(g.specific), to_lower(g.general));
            if (!inserted) {
                add(Rule::MultipleGenerals, g.specific, "class has more than one general");
            }
        }
        std::set<std::string> reported;
        for (const auto& [start, unused] : parent) {
            std::set<std::string> path{start};
            auto it = parent.find(start);
            while (it != parent.end()) {
                if (!path.insert(it->second).second) {
                    if (reported.insert(it->second).second) {
                        add(Rule::GeneralizationCycle, it->second, "generalization graph contains a cycle");
                    }
                    break;
                }
                it = parent.find(it->second);
            }
        }
    }

    const DomainModel& model_;
    ValidationResult result_;
};

}  // namespace

ValidationResult validate_model(const DomainModel& model) {
    return Checker(model).run();
}

void require_valid(const DomainModel& model) {
    auto result = validate_model(model);
    if (!result.ok()) {
        throw Error(ErrorCode::ValidationFailed, "model '" + model.name + "' is invalid:\n" + result.describe());
    }
}

}  // namespace lcpbridge::pivot
