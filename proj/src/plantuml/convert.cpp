#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "lcpbridge/error.hpp"
#include "lcpbridge/pivot/validate.hpp"
#include "lcpbridge/plantuml.hpp"

namespace lcpbridge::plantuml {

using pivot::DomainModel;
using pivot::Multiplicity;
using pivot::Primitive;

namespace {

std::optional<Primitive> type_token(std::string_view token) {
    static const std::map<std::string, Primitive> table = {
        {"string", Primitive::Str},     {"text", Primitive::Str},       {"str", Primitive::Str},
        {"varchar", Primitive::Str},    {"char", Primitive::Str},       {"int", Primitive::Int},
        {"integer", Primitive::Int},    {"long", Primitive::Int},       {"short", Primitive::Int},
        {"float", Primitive::Float},    {"double", Primitive::Float},   {"decimal", Primitive::Float},
        {"number", Primitive::Float},   {"real", Primitive::Float},     {"bool", Primitive::Bool},
        {"boolean", Primitive::Bool},   {"date", Primitive::Date},      {"datetime", Primitive::DateTime},
        {"timestamp", Primitive::DateTime}, {"time", Primitive::Time},  {"binary", Primitive::Binary},
        {"blob", Primitive::Binary},    {"bytes", Primitive::Binary},
    };
    auto it = table.find(pivot::to_lower(token));
    if (it == table.end()) return std::nullopt;
    return it->second;
}

bool looks_like_multiplicity(std::string_view token) {
    return !token.empty() && std::all_of(token.begin(), token.end(), [](char ch) {
        return std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '*';
    });
}

/// Builds the pivot model from document elements, sanitizing names and
/// auto-declaring classes that only appear in relationships.
class Converter {
public:
    Converter(PlantUmlDocument& doc, std::string model_name) : doc_(doc) {
        result_.model.name = std::move(model_name);
    }

    ParseResult run() {
        for (const auto& el : doc_.elements) {
            if (const auto* e = std::get_if<EnumDecl>(&el)) enumeration(*e);
        }
        for (const auto& el : doc_.elements) {
            if (const auto* c = std::get_if<ClassDecl>(&el)) klass(*c);
        }
        for (const auto& el : doc_.elements) {
            if (const auto* c = std::get_if<ClassDecl>(&el); c && !c->extends.empty()) {
                generalization(class_ref(c->extends), class_ref(c->name), c->line);
            }
            if (const auto* r = std::get_if<RelationDecl>(&el)) relation(*r);
        }
        result_.skipped = doc_.skipped;
        pivot::require_valid(result_.model);
        return std::move(result_);
    }

private:
    std::string name(const std::string& raw, const char* kind) {
        if (raw.empty()) throw Error(ErrorCode::EmptyName, std::string("empty ") + kind + " name");
        std::string clean = pivot::sanitize_identifier(raw);
        if (clean != raw && renamed_.insert(std::string(kind) + ":" + raw).second) {
            result_.losses.add(kind, raw, LossReason::Renamed, Severity::Info, "renamed to '" + clean + "'");
        }
        return clean;
    }

    void enumeration(const EnumDecl& decl) {
        std::string enum_name = name(decl.name, "enumeration");
        if (pivot::primitive_from_string(enum_name)) enum_name += "_enum";
        if (result_.model.find_enumeration(enum_name)) {
            doc_.skipped.push_back({decl.line, "enum " + decl.name, "duplicate enumeration"});
            result_.losses.add("enumeration", enum_name, LossReason::Dropped, Severity::Warning,
                               "duplicate enumeration; kept the first");
            return;
        }
        pivot::Enumeration e{enum_name, {}};
        std::set<std::string> seen;
        for (const auto& raw : decl.literals) {
            std::string lit = name(raw, "literal");
            if (seen.insert(lit).second) e.literals.push_back(lit);
        }
        if (e.literals.empty()) {
            result_.losses.add("enumeration", enum_name, LossReason::Dropped, Severity::Loss, "enumeration has no literals");
            return;
        }
        result_.model.enumerations.push_back(std::move(e));
    }

    pivot::Class& ensure_class(const std::string& class_name) {
        if (auto* c = result_.model.find_class(class_name)) return *c;
        result_.model.classes.push_back({class_name, {}});
        return result_.model.classes.back();
    }

    /// Resolves a class reference; enumerations are not classes.
    std::string class_ref(const std::string& raw) { return name(raw, "class"); }

    void klass(const ClassDecl& decl) {
        const std::string class_name = class_ref(decl.name);
        if (result_.model.find_enumeration(class_name)) {
            result_.losses.add("class", class_name, LossReason::Dropped, Severity::Loss,
                               "class name collides with an enumeration");
            return;
        }
        auto& c = ensure_class(class_name);
        bool has_id = std::any_of(c.properties.begin(), c.properties.end(), [](const auto& p) { return p.is_id; });
        for (const auto& attr : decl.attributes) {
            pivot::Property p;
            p.name = name(attr.name, "property");
            if (c.find_property(p.name)) {
                doc_.skipped.push_back({attr.line, attr.name, "duplicate attribute"});
                result_.losses.add("property", class_name + "." + p.name, LossReason::Dropped, Severity::Warning,
                                   "duplicate attribute; kept the first");
                continue;
            }
            p.type = resolve_type(class_name + "." + p.name, attr.type);
            p.is_id = attr.is_id && !has_id;
            if (attr.is_id && has_id) {
                result_.losses.add("property", class_name + "." + p.name, LossReason::Dropped, Severity::Warning,
                                   "second id marker ignored");
            }
            has_id = has_id || p.is_id;
            c.properties.push_back(std::move(p));
        }
    }

    pivot::TypeRef resolve_type(const std::string& qualified, const std::string& token) {
        if (token.empty()) {
            result_.losses.add("property", qualified, LossReason::TypeDefaulted, Severity::Warning,
                               "no type given; defaulted to str");
            return Primitive::Str;
        }
        for (const auto& e : result_.model.enumerations) {
            if (e.name == token) return pivot::EnumRef{e.name};
        }
        if (auto prim = type_token(token)) return *prim;
        if (const auto* e = result_.model.find_enumeration(token)) return pivot::EnumRef{e->name};
        result_.losses.add("property", qualified, LossReason::TypeCoerced, Severity::Loss,
                           "unknown type '" + token + "' mapped to str");
        return Primitive::Str;
    }

    void generalization(const std::string& general, const std::string& specific, std::size_t line) {
        if (result_.model.find_enumeration(general) || result_.model.find_enumeration(specific)) {
            doc_.skipped.push_back({line, specific + " extends " + general, "generalization involving an enumeration"});
            result_.losses.add("generalization", specific + "->" + general, LossReason::Dropped, Severity::Loss,
                               "generalization involving an enumeration");
            return;
        }
        const std::string g_name = ensure_class(general).name;
        const std::string s_name = ensure_class(specific).name;
        auto& gens = result_.model.generalizations;
        const bool present = std::any_of(gens.begin(), gens.end(), [&](const auto& g) {
            return pivot::iequals(g.general, g_name) && pivot::iequals(g.specific, s_name);
        });
        if (present) return;
        gens.push_back({g_name, s_name});
        const auto check = pivot::validate_model(result_.model);
        if (check.has(pivot::Rule::SelfGeneralization) || check.has(pivot::Rule::MultipleGenerals) ||
            check.has(pivot::Rule::GeneralizationCycle)) {
            gens.pop_back();
            result_.losses.add("generalization", s_name + "->" + g_name, LossReason::Dropped, Severity::Loss,
                               "would make the generalization graph invalid");
        }
    }

    void relation(const RelationDecl& rel) {
        const std::string left = class_ref(rel.left);
        const std::string right = class_ref(rel.right);
        if (rel.kind == RelationDecl::Kind::Generalization) {
            generalization(left, right, rel.line);
            return;
        }
        if (result_.model.find_enumeration(left) || result_.model.find_enumeration(right)) {
            result_.losses.add("association", left + "-" + right, LossReason::Dropped, Severity::Info,
                               "relationship to an enumeration is expressed by the property type");
            return;
        }
        pivot::Association a;
        const EndLabel l1 = parse_end_label(rel.left_label);
        const EndLabel l2 = parse_end_label(rel.right_label);
        a.end1 = {l1.role.empty() ? pivot::lower_first(left) : name(l1.role, "role"), ensure_class(left).name,
                  l1.multiplicity, rel.left_arrow};
        a.end2 = {l2.role.empty() ? pivot::lower_first(right) : name(l2.role, "role"), ensure_class(right).name,
                  l2.multiplicity, rel.right_arrow};
        if (pivot::iequals(a.end1.class_name, a.end2.class_name) && pivot::iequals(a.end1.role, a.end2.role)) {
            a.end2.role += "2";
        }
        std::string base = rel.name.empty() ? left + "_" + right : name(rel.name, "association");
        a.name = base;
        for (int n = 2; result_.model.find_association(a.name); ++n) a.name = base + "_" + std::to_string(n);
        if (rel.aggregation) {
            result_.losses.add("association", a.name, LossReason::UnsupportedConstruct, Severity::Info,
                               "aggregation/composition read as a plain association");
        }
        result_.model.associations.push_back(std::move(a));
    }

    PlantUmlDocument& doc_;
    ParseResult result_;
    std::set<std::string> renamed_;
};

}  // namespace

Multiplicity parse_multiplicity(std::string_view token) {
    auto fail = [&]() -> Multiplicity {
        throw Error(ErrorCode::MalformedMultiplicity, "malformed multiplicity '" + std::string(token) + "'");
    };
    auto bound = [&](std::string_view part) -> std::optional<std::uint32_t> {
        if (part == "*") return std::nullopt;
        if (part.empty() || part.size() > 9 ||
            !std::all_of(part.begin(), part.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            fail();
        }
        return static_cast<std::uint32_t>(std::stoul(std::string(part)));
    };
    Multiplicity m;
    const auto dots = token.find("..");
    if (dots == std::string_view::npos) {
        if (token == "*") return Multiplicity::many();
        const auto value = bound(token);
        m = {*value, value};
    } else {
        const auto lower = bound(token.substr(0, dots));
        if (!lower) fail();
        m = {*lower, bound(token.substr(dots + 2))};
    }
    if (m.upper && (*m.upper == 0 || m.lower > *m.upper)) fail();
    return m;
}

EndLabel parse_end_label(std::string_view label) {
    EndLabel out{"", Multiplicity::many()};
    std::istringstream in{std::string(label)};
    std::vector<std::string> role_words;
    bool have_multiplicity = false;
    for (std::string word; in >> word;) {
        if (!have_multiplicity && looks_like_multiplicity(word)) {
            out.multiplicity = parse_multiplicity(word);
            have_multiplicity = true;
        } else {
            role_words.push_back(word);
        }
    }
    for (const auto& w : role_words) {
        if (!out.role.empty()) out.role += "_";
        out.role += w;
    }
    return out;
}

ParseResult parse_plantuml(std::string_view text, std::string_view default_model_name) {
    PlantUmlDocument doc = read_document(text);
    std::string model_name = doc.title.empty() ? std::string(default_model_name) : pivot::sanitize_identifier(doc.title);
    return Converter(doc, std::move(model_name)).run();
}

namespace {

std::string end_label(const pivot::AssociationEnd& e) {
    return "\"" + e.role + " " + pivot::to_string(e.multiplicity) + "\"";
}

}  // namespace

std::string emit_plantuml(const DomainModel& model) {
    pivot::require_valid(model);
    std::ostringstream out;
    out << "@startuml";
    if (!model.name.empty()) out << ' ' << model.name;
    out << '\n';
    for (const auto& e : model.enumerations) {
        out << "enum " << e.name << " {\n";
        for (const auto& lit : e.literals) out << "  " << lit << '\n';
        out << "}\n";
    }
    for (const auto& c : model.classes) {
        out << "class " << c.name << " {\n";
        for (const auto& p : c.properties) {
            out << "  " << p.name << " : " << pivot::type_name(p.type);
            if (p.is_id) out << " {id}";
            out << '\n';
        }
        out << "}\n";
    }
    for (const auto& g : model.generalizations) {
        out << g.general << " <|-- " << g.specific << '\n';
    }
    for (const auto& a : model.associations) {
        out << a.end1.class_name << ' ' << end_label(a.end1) << ' ' << (a.end1.navigable ? "<" : "") << "--"
            << (a.end2.navigable ? ">" : "") << ' ' << end_label(a.end2) << ' ' << a.end2.class_name << " : "
            << a.name << '\n';
    }
    out << "@enduml\n";
    return out.str();
}

}  // namespace lcpbridge::plantuml
