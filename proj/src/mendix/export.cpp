#include <set>

#include "lcpbridge/error.hpp"
#include "lcpbridge/mendix.hpp"

namespace lcpbridge::mendix {

using nlohmann::json;

namespace {

class Reader {
public:
    explicit Reader(std::vector<std::string>& warnings) : warnings_(warnings) {}

    const json& object(const json& parent, const std::string& key, const std::string& path) {
        auto it = parent.find(key);
        if (it == parent.end()) throw Error(ErrorCode::MissingField, path + "." + key + " is missing");
        if (!it->is_object()) throw Error(ErrorCode::MalformedDocument, path + "." + key + " must be an object");
        return *it;
    }

    std::string string(const json& parent, const std::string& key, const std::string& path) {
        auto it = parent.find(key);
        if (it == parent.end() || it->is_null()) {
            throw Error(ErrorCode::MissingField, path + "." + key + " is missing");
        }
        if (!it->is_string()) throw Error(ErrorCode::MalformedDocument, path + "." + key + " must be a string");
        auto value = it->get<std::string>();
        if (value.empty()) throw Error(ErrorCode::MissingField, path + "." + key + " is empty");
        return value;
    }

    std::optional<std::string> optional_string(const json& parent, const std::string& key,
                                               const std::string& path) {
        auto it = parent.find(key);
        if (it == parent.end() || it->is_null()) return std::nullopt;
        if (!it->is_string()) throw Error(ErrorCode::MalformedDocument, path + "." + key + " must be a string");
        return it->get<std::string>();
    }

    // Absent arrays read as empty.
    const json& array(const json& parent, const std::string& key, const std::string& path) {
        static const json empty = json::array();
        auto it = parent.find(key);
        if (it == parent.end() || it->is_null()) return empty;
        if (!it->is_array()) throw Error(ErrorCode::MalformedDocument, path + "." + key + " must be an array");
        return *it;
    }

    void check_fields(const json& object, std::initializer_list<std::string_view> known, const std::string& path) {
        if (!object.is_object()) throw Error(ErrorCode::MalformedDocument, path + " must be an object");
        for (const auto& [key, value] : object.items()) {
            bool found = false;
            for (auto k : known) found = found || k == key;
            if (!found) warnings_.push_back(path + "." + key + ": unknown field ignored");
        }
    }

    void warn(std::string message) { warnings_.push_back(std::move(message)); }

private:
    std::vector<std::string>& warnings_;
};

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

template <typename T>
void require_unique(const std::vector<T>& items, const char* what) {
    std::set<std::string> seen;
    for (const auto& item : items) {
        if (!seen.insert(item.name).second) {
            throw Error(ErrorCode::MalformedDocument, std::string("duplicate ") + what + " name '" + item.name + "'");
        }
    }
}

}  // namespace

MendixExport parse_mendix_export(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("not a JSON document: ") + e.what());
    }
    return read_mendix_export(doc);
}

MendixExport read_mendix_export(const json& doc) {
    MendixExport out;
    Reader r(out.warnings);
    r.check_fields(doc, {"domainModel"}, "$");
    const json& dm = r.object(doc, "domainModel", "$");
    const std::string base = "domainModel";
    r.check_fields(dm, {"name", "entities", "associations", "enumerations"}, base);
    out.name = r.optional_string(dm, "name", base).value_or("");
    if (out.name.empty()) out.name = "DomainModel";

    const auto& enums = r.array(dm, "enumerations", base);
    for (std::size_t i = 0; i < enums.size(); ++i) {
        const auto path = index_path(base + ".enumerations", i);
        r.check_fields(enums[i], {"name", "values"}, path);
        Enumeration e{r.string(enums[i], "name", path), {}};
        const auto& values = r.array(enums[i], "values", path);
        for (std::size_t k = 0; k < values.size(); ++k) {
            // Mendix values carry a caption; accept {"name": ...} objects as well.
            if (values[k].is_string()) {
                e.values.push_back(values[k].get<std::string>());
            } else if (values[k].is_object()) {
                e.values.push_back(r.string(values[k], "name", index_path(path + ".values", k)));
            } else {
                throw Error(ErrorCode::MalformedDocument, index_path(path + ".values", k) + " must be a string");
            }
        }
        out.enumerations.push_back(std::move(e));
    }
    require_unique(out.enumerations, "enumeration");

    const auto& entities = r.array(dm, "entities", base);
    for (std::size_t i = 0; i < entities.size(); ++i) {
        const auto path = index_path(base + ".entities", i);
        r.check_fields(entities[i], {"name", "attributes", "generalization"}, path);
        Entity e{r.string(entities[i], "name", path), {}, r.optional_string(entities[i], "generalization", path)};
        if (e.generalization && e.generalization->empty()) e.generalization.reset();
        const auto& attrs = r.array(entities[i], "attributes", path);
        for (std::size_t k = 0; k < attrs.size(); ++k) {
            const auto apath = index_path(path + ".attributes", k);
            r.check_fields(attrs[k], {"name", "type", "enumeration"}, apath);
            Attribute a{r.string(attrs[k], "name", apath), r.string(attrs[k], "type", apath),
                        r.optional_string(attrs[k], "enumeration", apath)};
            if (a.type == "Enumeration" && !a.enumeration) {
                throw Error(ErrorCode::MissingField, apath + ".enumeration is missing");
            }
            e.attributes.push_back(std::move(a));
        }
        require_unique(e.attributes, ("attribute of " + e.name).c_str());
        out.entities.push_back(std::move(e));
    }
    require_unique(out.entities, "entity");

    const auto& assocs = r.array(dm, "associations", base);
    for (std::size_t i = 0; i < assocs.size(); ++i) {
        const auto path = index_path(base + ".associations", i);
        r.check_fields(assocs[i], {"name", "parent", "child", "type", "owner"}, path);
        Association a;
        a.name = r.string(assocs[i], "name", path);
        a.parent = r.string(assocs[i], "parent", path);
        a.child = r.string(assocs[i], "child", path);
        const auto type = r.optional_string(assocs[i], "type", path);
        if (!type) {
            r.warn(path + ".type: absent, read as Reference");
        } else if (*type == "ReferenceSet") {
            a.type = AssociationType::ReferenceSet;
        } else if (*type != "Reference") {
            throw Error(ErrorCode::MalformedDocument, path + ".type must be Reference or ReferenceSet");
        }
        const auto owner = r.optional_string(assocs[i], "owner", path);
        if (!owner) {
            r.warn(path + ".owner: absent, read as Default");
        } else if (*owner == "Both") {
            a.owner = AssociationOwner::Both;
        } else if (*owner != "Default") {
            throw Error(ErrorCode::MalformedDocument, path + ".owner must be Default or Both");
        }
        out.associations.push_back(std::move(a));
    }
    require_unique(out.associations, "association");

    // Reference checks run after everything is read so declaration order does not matter.
    std::set<std::string> entity_names, enum_names;
    for (const auto& e : out.entities) entity_names.insert(e.name);
    for (const auto& e : out.enumerations) enum_names.insert(e.name);
    for (const auto& e : out.entities) {
        if (e.generalization && !entity_names.count(*e.generalization)) {
            throw Error(ErrorCode::DanglingReference,
                        "entity '" + e.name + "' generalizes unknown entity '" + *e.generalization + "'");
        }
        for (const auto& a : e.attributes) {
            if (a.enumeration && a.type == "Enumeration" && !enum_names.count(*a.enumeration)) {
                throw Error(ErrorCode::DanglingReference, "attribute '" + e.name + "." + a.name +
                                                              "' references unknown enumeration '" +
                                                              *a.enumeration + "'");
            }
        }
    }
    for (const auto& a : out.associations) {
        for (const auto* end : {&a.parent, &a.child}) {
            if (!entity_names.count(*end)) {
                throw Error(ErrorCode::DanglingReference,
                            "association '" + a.name + "' references unknown entity '" + *end + "'");
            }
        }
    }
    return out;
}

}  // namespace lcpbridge::mendix
