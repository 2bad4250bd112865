#include <map>
#include <set>

#include "lcpbridge/mendix.hpp"
#include "lcpbridge/pivot/validate.hpp"

namespace lcpbridge::mendix {

using namespace lcpbridge::pivot;

std::pair<Multiplicity, Multiplicity> end_multiplicities(AssociationType type, AssociationOwner owner) {
    if (type == AssociationType::ReferenceSet) return {Multiplicity::many(), Multiplicity::many()};
    if (owner == AssociationOwner::Both) return {Multiplicity::optional_one(), Multiplicity::optional_one()};
    return {Multiplicity::many(), Multiplicity::optional_one()};
}

namespace {

class Converter {
public:
    explicit Converter(const MendixExport& source) : src_(source) {}

    ImportResult run() {
        out_.model.name = name("model", src_.name);
        out_.provenance.push_back({"model", out_.model.name, "domainModel"});

        for (std::size_t i = 0; i < src_.enumerations.size(); ++i) {
            const auto& e = src_.enumerations[i];
            pivot::Enumeration pe{name("enumeration", e.name), {}};
            for (const auto& v : e.values) pe.literals.push_back(name("literal", v));
            enum_names_[e.name] = pe.name;
            out_.provenance.push_back({"enumeration", pe.name, "enumerations[" + std::to_string(i) + "]"});
            out_.model.enumerations.push_back(std::move(pe));
        }

        for (const auto& e : src_.entities) class_names_[e.name] = name("class", e.name);

        for (std::size_t i = 0; i < src_.entities.size(); ++i) {
            const auto& e = src_.entities[i];
            const auto path = "entities[" + std::to_string(i) + "]";
            Class c{class_names_.at(e.name), {}};
            for (std::size_t k = 0; k < e.attributes.size(); ++k) {
                const auto& a = e.attributes[k];
                Property p{name("property", a.name), property_type(c.name, a), false};
                out_.provenance.push_back(
                    {"property", c.name + "." + p.name, path + ".attributes[" + std::to_string(k) + "]"});
                c.properties.push_back(std::move(p));
            }
            out_.provenance.push_back({"class", c.name, path});
            if (e.generalization) {
                Generalization g{class_names_.at(*e.generalization), c.name};
                out_.provenance.push_back({"generalization", g.general + "<|-" + g.specific, path + ".generalization"});
                out_.model.generalizations.push_back(std::move(g));
            }
            out_.model.classes.push_back(std::move(c));
        }

        for (const auto& c : out_.model.classes) {
            for (const auto& p : c.properties) used_.insert({to_lower(c.name), to_lower(p.name)});
        }
        for (std::size_t i = 0; i < src_.associations.size(); ++i) {
            out_.model.associations.push_back(association(src_.associations[i]));
            out_.provenance.push_back(
                {"association", out_.model.associations.back().name, "associations[" + std::to_string(i) + "]"});
        }

        require_valid(out_.model);
        return std::move(out_);
    }

private:
    std::string name(const char* kind, const std::string& raw) {
        auto clean = sanitize_identifier(raw);
        if (clean != raw) {
            out_.losses.add(kind, raw, LossReason::Renamed, Severity::Warning, "renamed to " + clean);
        }
        return clean;
    }

    TypeRef property_type(const std::string& owner, const Attribute& a) {
        const auto element = owner + "." + sanitize_identifier(a.name);
        const auto& t = a.type;
        if (t == "String") return Primitive::Str;
        if (t == "Integer" || t == "Long") return Primitive::Int;
        if (t == "Decimal") return Primitive::Float;
        if (t == "Boolean") return Primitive::Bool;
        if (t == "DateTime") return Primitive::DateTime;
        if (t == "Binary") return Primitive::Binary;
        if (t == "Enumeration") return EnumRef{enum_names_.at(*a.enumeration)};
        if (t == "HashedString") {
            out_.losses.add("property", element, LossReason::TypeCoerced, Severity::Loss,
                            "HashedString read as str; hashing is not represented");
            return Primitive::Str;
        }
        if (t == "AutoNumber") {
            out_.losses.add("property", element, LossReason::TypeCoerced, Severity::Loss,
                            "AutoNumber read as int; auto-increment is not represented");
            return Primitive::Int;
        }
        out_.losses.add("property", element, LossReason::TypeCoerced, Severity::Loss,
                        "unknown Mendix type " + t + " read as str");
        return Primitive::Str;
    }

    // A role names the far end as seen from the near class, so it must not
    // clash with the near class's properties or other roles.
    std::string role(const std::string& near_class, std::string wanted, const std::string& fallback) {
        const auto key = [&](const std::string& r) { return std::pair{to_lower(near_class), to_lower(r)}; };
        if (used_.count(key(wanted))) wanted = fallback;
        std::string candidate = wanted;
        for (int n = 2; used_.count(key(candidate)); ++n) candidate = wanted + std::to_string(n);
        used_.insert(key(candidate));
        return candidate;
    }

    pivot::Association association(const mendix::Association& a) {
        const auto& child = class_names_.at(a.child);
        const auto& parent = class_names_.at(a.parent);
        const auto [child_mult, parent_mult] = end_multiplicities(a.type, a.owner);
        const auto assoc_name = name("association", a.name);
        std::string child_role = lower_first(child), parent_role = lower_first(parent);
        if (child == parent) {
            child_role += "_child";
            parent_role += "_parent";
        }
        const auto fallback = lower_first(assoc_name);
        // Child-to-parent navigation always holds; Both adds the reverse direction.
        AssociationEnd child_end{role(parent, child_role, fallback + "_" + lower_first(child)), child, child_mult,
                                 a.owner == AssociationOwner::Both};
        AssociationEnd parent_end{role(child, parent_role, fallback), parent, parent_mult, true};
        return {assoc_name, child_end, parent_end};
    }

    const MendixExport& src_;
    ImportResult out_;
    std::map<std::string, std::string> class_names_, enum_names_;
    std::set<std::pair<std::string, std::string>> used_;
};

}  // namespace

ImportResult mendix_to_pivot(const MendixExport& source) { return Converter(source).run(); }

}  // namespace lcpbridge::mendix
