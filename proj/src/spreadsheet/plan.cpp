#include <map>
#include <set>

#include "lcpbridge/naming.hpp"
#include "lcpbridge/pivot/validate.hpp"
#include "lcpbridge/spreadsheet.hpp"

namespace lcpbridge::spreadsheet {

using namespace lcpbridge::pivot;

const SheetSpec* WorkbookManifest::find_sheet(std::string_view name) const {
    for (const auto& s : sheets) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

namespace {

struct Column {
    ColumnSpec spec;
    std::string sample;
};

struct Sheet {
    std::string name;
    SheetKind kind;
    std::vector<Column> columns;
};

class Planner {
public:
    Planner(const DomainModel& model, const PlanOptions& options) : model_(model), options_(options) {}

    PlanResult run() {
        out_.manifest.workbook_name = model_.name;
        for (const auto& c : model_.classes) class_sheet(c);
        for (const auto& a : model_.associations) association(a);
        for (const auto& g : model_.generalizations) {
            out_.losses.add("generalization", g.general + "<|-" + g.specific, LossReason::GeneralizationFlattened,
                            Severity::Warning, "sheet " + sheet_of_.at(g.specific) + " repeats inherited columns");
        }
        out_.losses.add("model", model_.name, LossReason::AssociationsUnknown, Severity::Warning,
                        "associations survive only as dropdowns and bridge sheets; the target platform needs data "
                        "rows to recognize them");
        if (!options_.sample_row) {
            out_.losses.add("model", model_.name, LossReason::SampleRowSuppressed, Severity::Warning,
                            "without a data row the target platform may not recognize types or relationships");
        }

        for (auto& s : sheets_) {
            SheetSpec spec{s.name, s.kind, {}, std::nullopt};
            std::vector<std::string> sample;
            for (auto& c : s.columns) {
                spec.columns.push_back(c.spec);
                sample.push_back(c.sample);
            }
            if (options_.sample_row) spec.sample_row = std::move(sample);
            out_.manifest.sheets.push_back(std::move(spec));
        }
        check_manifest(out_.manifest);
        return std::move(out_);
    }

private:
    std::string sheet_name(const std::string& wanted, const std::string& element_kind, const std::string& element) {
        std::string name = shorten(wanted, xlsx::kMaxSheetName, 5);
        for (int n = 2; used_sheets_.count(to_lower(name)); ++n) {
            const auto suffix = "_" + std::to_string(n);
            name = shorten(wanted, xlsx::kMaxSheetName - suffix.size(), 5) + suffix;
        }
        used_sheets_.insert(to_lower(name));
        if (name != wanted) {
            out_.losses.add(element_kind, element, LossReason::Renamed, Severity::Warning, "sheet named " + name);
        }
        return name;
    }

    // Flattened property list: ancestors root first, then own; a redeclared
    // name keeps the subclass's declaration. The identifier moves to the front.
    std::vector<Property> flattened(const Class& c) const {
        std::vector<const Class*> chain;
        for (const auto& ancestor : model_.ancestors_of(c.name)) chain.insert(chain.begin(), model_.find_class(ancestor));
        chain.push_back(&c);
        std::vector<Property> props;
        for (const auto* k : chain) {
            for (const auto& p : k->properties) {
                std::erase_if(props, [&](const Property& q) { return iequals(q.name, p.name); });
                props.push_back(p);
            }
        }
        for (std::size_t i = 0; i < props.size(); ++i) {
            if (props[i].is_id) {
                auto id = props[i];
                props.erase(props.begin() + static_cast<std::ptrdiff_t>(i));
                props.insert(props.begin(), id);
                break;
            }
        }
        return props;
    }

    Column property_column(const std::string& class_name, const Property& p) {
        Column col{{p.name, format::kGeneral, {}}, ""};
        if (const auto* e = std::get_if<EnumRef>(&p.type)) {
            const auto* en = model_.find_enumeration(e->name);
            col.spec.validation = {Validation::Kind::List, "", en->literals};
            col.sample = en->literals.front();
            return col;
        }
        switch (std::get<Primitive>(p.type)) {
            case Primitive::Str: col.sample = "Sample"; break;
            case Primitive::Int: col.spec.cell_format = format::kInteger; col.sample = "1"; break;
            case Primitive::Float: col.spec.cell_format = format::kDecimal; col.sample = "1.5"; break;
            case Primitive::Bool:
                col.spec.cell_format = format::kBoolean;
                col.spec.validation = {Validation::Kind::List, "", {"TRUE", "FALSE"}};
                col.sample = "TRUE";
                break;
            case Primitive::Date: col.spec.cell_format = format::kDate; col.sample = "01/01/2024"; break;
            case Primitive::DateTime: col.spec.cell_format = format::kDateTime; col.sample = "01/01/2024 00:00"; break;
            case Primitive::Time:
                col.spec.cell_format = format::kTime;
                col.sample = "00:00:00";
                out_.losses.add("property", class_name + "." + p.name, LossReason::TypeCoerced, Severity::Warning,
                                "time of day stored as HH:MM:SS text");
                break;
            case Primitive::Binary:
                out_.losses.add("property", class_name + "." + p.name, LossReason::TypeCoerced, Severity::Loss,
                                "binary content has no cell representation; column left as text");
                break;
        }
        return col;
    }

    void class_sheet(const Class& c) {
        Sheet sheet{sheet_name(c.name, "class", c.name), SheetKind::Class, {}};
        sheet_of_[c.name] = sheet.name;
        for (const auto& p : flattened(c)) sheet.columns.push_back(property_column(c.name, p));
        if (sheet.columns.empty()) {
            sheet.columns.push_back({{"id", format::kInteger, {}}, "1"});
            out_.losses.add("class", c.name, LossReason::KeySynthesized, Severity::Info,
                            "class has no properties; key column id added so other sheets can reference it");
        }
        index_[sheet.name] = sheets_.size();
        sheets_.push_back(std::move(sheet));
    }

    Sheet& sheet(const std::string& name) { return sheets_[index_.at(name)]; }

    void add_dropdown(Sheet& holder, const std::string& wanted_header, const std::string& target_class,
                      const std::string& association_name) {
        const auto& source = sheet(sheet_of_.at(target_class));
        const auto& key = source.columns.front();
        std::string header = wanted_header;
        auto taken = [&](const std::string& h) {
            for (const auto& col : holder.columns) {
                if (iequals(col.spec.header, h)) return true;
            }
            return false;
        };
        if (taken(header)) header = wanted_header + "_ref";
        const std::string base = header;
        for (int n = 2; taken(header); ++n) header = base + std::to_string(n);
        if (header != wanted_header) {
            out_.losses.add("association", association_name, LossReason::Renamed, Severity::Warning,
                            "dropdown column " + wanted_header + " on " + holder.name + " named " + header);
        }
        holder.columns.push_back(
            {{header, key.spec.cell_format, {Validation::Kind::Dropdown, source.name, {}}}, key.sample});
    }

    void association(const Association& a) {
        switch (a.kind()) {
            case AssociationKind::ManyToOne: {
                const bool end1_many = a.end1.multiplicity.is_many();
                const auto& many = end1_many ? a.end1 : a.end2;
                const auto& one = end1_many ? a.end2 : a.end1;
                add_dropdown(sheet(sheet_of_.at(many.class_name)), one.role, one.class_name, a.name);
                break;
            }
            case AssociationKind::OneToOne: {
                const bool end1_holds = a.end1.class_name <= a.end2.class_name;
                const auto& holder = end1_holds ? a.end1 : a.end2;
                const auto& other = end1_holds ? a.end2 : a.end1;
                add_dropdown(sheet(sheet_of_.at(holder.class_name)), other.role, other.class_name, a.name);
                out_.losses.add("association", a.name, LossReason::OneToOneAsManyToOne, Severity::Warning,
                                "encoded as a dropdown on " + sheet_of_.at(holder.class_name) +
                                "; uniqueness is not enforced");
                break;
            }
            case AssociationKind::ManyToMany: {
                const auto wanted = upper_snake(a.end1.class_name) + "_" + upper_snake(a.end2.class_name);
                std::string name = wanted;
                if (used_sheets_.count(to_lower(shorten(wanted, xlsx::kMaxSheetName, 5)))) name = upper_snake(a.name);
                Sheet bridge{sheet_name(name, "association", a.name), SheetKind::Bridge, {}};
                index_[bridge.name] = sheets_.size();
                sheets_.push_back(std::move(bridge));
                auto& b = sheets_.back();
                const bool self = a.is_self();
                add_dropdown(b, self ? a.end1.role : a.end1.class_name, a.end1.class_name, a.name);
                add_dropdown(b, self ? a.end2.role : a.end2.class_name, a.end2.class_name, a.name);
                break;
            }
        }
    }

    const DomainModel& model_;
    const PlanOptions& options_;
    PlanResult out_;
    std::vector<Sheet> sheets_;
    std::map<std::string, std::size_t> index_;
    std::map<std::string, std::string> sheet_of_;  // class -> sheet
    std::set<std::string> used_sheets_;
};

}  // namespace

PlanResult plan_workbook(const DomainModel& model, const PlanOptions& options) {
    require_valid(model);
    return Planner(model, options).run();
}

}  // namespace lcpbridge::spreadsheet
