#include <algorithm>

#include "lcpbridge/llm.hpp"
#include "lcpbridge/pivot/validate.hpp"

namespace lcpbridge::llm {

using namespace lcpbridge::pivot;

namespace {

std::string literals_text(const Enumeration& e) {
    std::string out;
    for (const auto& l : e.literals) out += (out.empty() ? "" : ", ") + l;
    return out;
}

std::string describe(const Association& a) {
    return a.end1.class_name + " " + to_string(a.end1.multiplicity) + " -- " + to_string(a.end2.multiplicity) + " " +
           a.end2.class_name;
}

class Merger {
public:
    Merger(const DomainModel& partial, const DomainModel& inferred) : inferred_(inferred) { out_.model = partial; }

    MergeResult run() {
        for (const auto& e : inferred_.enumerations) enumeration(e);
        for (const auto& c : inferred_.classes) class_or_properties(c);
        for (const auto& g : inferred_.generalizations) generalization(g);
        for (const auto& a : inferred_.associations) association(a);
        return std::move(out_);
    }

private:
    DomainModel& model() { return out_.model; }

    Class* find_class(std::string_view name) {
        for (auto& c : model().classes) {
            if (iequals(c.name, name)) return &c;
        }
        return nullptr;
    }

    const Enumeration* find_enum(std::string_view name) const {
        for (const auto& e : out_.model.enumerations) {
            if (iequals(e.name, name)) return &e;
        }
        return nullptr;
    }

    // Applies `change` and keeps it only when the model stays valid.
    template <typename Change, typename Undo>
    bool try_add(const std::string& element, Change change, Undo undo) {
        change();
        const auto result = validate_model(model());
        if (result.ok()) return true;
        undo();
        out_.report.skipped.push_back(element + ": " + result.violations.front().message);
        return false;
    }

    // Rewrites an inferred type onto the merged model's enumeration names.
    TypeRef resolve(const TypeRef& t) {
        if (const auto* e = std::get_if<EnumRef>(&t)) {
            if (const auto* found = find_enum(e->name)) return EnumRef{found->name};
        }
        return t;
    }

    void enumeration(const Enumeration& e) {
        if (const auto* existing = find_enum(e.name)) {
            if (literals_text(*existing) != literals_text(e)) {
                out_.report.conflicts.push_back({existing->name, literals_text(*existing), literals_text(e)});
            }
            return;
        }
        if (try_add(e.name, [&] { model().enumerations.push_back(e); }, [&] { model().enumerations.pop_back(); })) {
            out_.report.added_enumerations.push_back(e.name);
        }
    }

    void class_or_properties(const Class& inferred) {
        Class* existing = find_class(inferred.name);
        if (!existing) {
            Class added = inferred;
            for (auto& p : added.properties) p.type = resolve(p.type);
            if (try_add(inferred.name, [&] { model().classes.push_back(added); }, [&] { model().classes.pop_back(); })) {
                out_.report.added_classes.push_back(inferred.name);
            }
            return;
        }
        for (const auto& p : inferred.properties) {
            // Re-find after each change: adding a property never moves classes,
            // but keep the pointer honest.
            existing = find_class(inferred.name);
            const std::string element = existing->name + "." + p.name;
            const auto it = std::find_if(existing->properties.begin(), existing->properties.end(),
                                         [&](const Property& q) { return iequals(q.name, p.name); });
            if (it != existing->properties.end()) {
                const auto inferred_type = resolve(p.type);
                if (!(it->type == inferred_type)) {
                    out_.report.conflicts.push_back({existing->name + "." + it->name, type_name(it->type),
                                                     type_name(inferred_type)});
                }
                continue;
            }
            Property added{p.name, resolve(p.type), p.is_id};
            const bool has_id = std::any_of(existing->properties.begin(), existing->properties.end(),
                                            [](const Property& q) { return q.is_id; });
            if (added.is_id && has_id) added.is_id = false;
            const auto name = existing->name;
            if (try_add(element, [&] { find_class(name)->properties.push_back(added); },
                        [&] { find_class(name)->properties.pop_back(); })) {
                out_.report.added_properties.push_back(element);
            }
        }
    }

    void generalization(const Generalization& g) {
        const Class* general = find_class(g.general);
        const Class* specific = find_class(g.specific);
        const std::string element = g.general + " <|-- " + g.specific;
        if (!general || !specific) {
            out_.report.skipped.push_back(element + ": class missing from the merged model");
            return;
        }
        Generalization mapped{general->name, specific->name};
        if (const auto current = model().general_of(mapped.specific)) {
            if (!iequals(*current, mapped.general)) {
                out_.report.conflicts.push_back({mapped.specific + " generalization", *current, mapped.general});
            }
            return;
        }
        if (try_add(element, [&] { model().generalizations.push_back(mapped); },
                    [&] { model().generalizations.pop_back(); })) {
            out_.report.added_generalizations.push_back(mapped.general + " <|-- " + mapped.specific);
        }
    }

    void association(const Association& a) {
        const Class* c1 = find_class(a.end1.class_name);
        const Class* c2 = find_class(a.end2.class_name);
        if (!c1 || !c2) {
            out_.report.skipped.push_back(a.name + ": end class missing from the merged model");
            return;
        }
        Association mapped = a;
        mapped.end1.class_name = c1->name;
        mapped.end2.class_name = c2->name;
        for (const auto& existing : model().associations) {
            if (!iequals(existing.name, a.name)) continue;
            if (!(existing.end1 == mapped.end1 && existing.end2 == mapped.end2) &&
                !(existing.end1 == mapped.end2 && existing.end2 == mapped.end1)) {
                out_.report.conflicts.push_back({existing.name, describe(existing), describe(mapped)});
            }
            return;
        }
        if (try_add(a.name, [&] { model().associations.push_back(mapped); },
                    [&] { model().associations.pop_back(); })) {
            out_.report.added_associations.push_back(a.name);
        }
    }

    const DomainModel& inferred_;
    MergeResult out_;
};

}  // namespace

bool MergeReport::empty() const {
    return added_classes.empty() && added_properties.empty() && added_enumerations.empty() &&
           added_associations.empty() && added_generalizations.empty() && conflicts.empty() && skipped.empty();
}

nlohmann::ordered_json to_json(const MergeReport& r) {
    nlohmann::ordered_json conflicts = nlohmann::ordered_json::array();
    for (const auto& c : r.conflicts) {
        conflicts.push_back({{"element", c.element},
                             {"partial_value", c.partial_value},
                             {"inferred_value", c.inferred_value},
                             {"resolution", c.resolution}});
    }
    return {{"added_classes", r.added_classes},
            {"added_properties", r.added_properties},
            {"added_enumerations", r.added_enumerations},
            {"added_associations", r.added_associations},
            {"added_generalizations", r.added_generalizations},
            {"conflicts", conflicts},
            {"skipped", r.skipped}};
}

MergeResult merge_models(const DomainModel& partial, const DomainModel& inferred) {
    return Merger(partial, inferred).run();
}

}  // namespace lcpbridge::llm
