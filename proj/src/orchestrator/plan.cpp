#include <algorithm>
#include <sstream>

#include "lcpbridge/error.hpp"
#include "lcpbridge/orchestrator.hpp"

namespace lcpbridge::orchestrator {

namespace {

bool has(const std::vector<std::string>& v, std::string_view s) { return std::find(v.begin(), v.end(), s) != v.end(); }

// First format of `offered` the adapter accepts.
std::optional<std::string> accepted(const Adapter& a, const std::vector<std::string>& offered) {
    for (const auto& f : offered) {
        if (has(a.inputs, f)) return f;
    }
    return std::nullopt;
}

bool serves(const Adapter& a, std::string_view platform) {
    return a.platforms.empty() || std::any_of(a.platforms.begin(), a.platforms.end(),
                                              [&](const auto& p) { return pivot::iequals(p, platform); });
}

}  // namespace

LossReport adapter_losses(std::string_view adapter) {
    LossReport losses;
    if (adapter == "mendix-json") {
        losses.add("adapter", std::string(adapter), LossReason::TypeCoerced, Severity::Info,
                   "HashedString and unknown attribute types become str");
    } else if (adapter == "tabular") {
        losses.add("adapter", std::string(adapter), LossReason::TypeDefaulted, Severity::Info,
                   "property types are inferred from sampled cell values");
        losses.add("adapter", std::string(adapter), LossReason::AssociationsUnknown, Severity::Warning,
                   "tabular exports carry no relationships; they must come from the screenshot");
    } else if (adapter == "image-llm") {
        losses.add("adapter", std::string(adapter), LossReason::LlmInferred, Severity::Warning,
                   "the vision LLM may miss or invent elements; review model.bml");
    } else if (adapter == "workbook") {
        losses.add("adapter", std::string(adapter), LossReason::GeneralizationFlattened, Severity::Info,
                   "inherited properties are copied into each subclass sheet");
        losses.add("adapter", std::string(adapter), LossReason::AssociationsUnknown, Severity::Warning,
                   "relationships become dropdowns and bridge sheets the target may not import");
    } else if (adapter == "csv") {
        losses.add("adapter", std::string(adapter), LossReason::Dropped, Severity::Loss,
                   "CSV drops validations, number formats and relationship encodings");
    } else if (adapter == "apex-sql") {
        losses.add("adapter", std::string(adapter), LossReason::EnumAsText, Severity::Info,
                   "enumerations become text columns with a check constraint");
    }
    return losses;
}

AdapterRegistry::AdapterRegistry(std::vector<Adapter> adapters) : adapters_(std::move(adapters)) {
    for (std::size_t i = 0; i < adapters_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (adapters_[i].id == adapters_[j].id && adapters_[i].kind == adapters_[j].kind) {
                throw Error(ErrorCode::InvalidConfig, "adapter id '" + adapters_[i].id + "' registered twice");
            }
        }
    }
}

const AdapterRegistry& AdapterRegistry::builtin() {
    using K = AdapterKind;
    using R = AdapterRole;
    static const AdapterRegistry registry({
        {"mendix-json", K::Importer, R::Formal, {"JSON"}, {std::string(kPivot)}, {"mendix"},
         "Mendix domain model JSON export"},
        {"plantuml", K::Importer, R::Formal, {"PUML"}, {std::string(kPivot)}, {}, "PlantUML class diagram"},
        {"tabular", K::Importer, R::Supplement, {"CSV", "XLSX"}, {std::string(kPivot)}, {},
         "CSV or XLSX tables, classes and attributes only"},
        {"image-llm", K::Importer, R::Alternative, {"PNG", "JPEG"}, {std::string(kPivot)}, {},
         "screenshot read by a vision LLM as PlantUML"},
        {"apex-sql", K::Exporter, R::Formal, {std::string(kPivot)}, {"SQL"}, {}, "relational DDL script"},
        {"workbook", K::Exporter, R::Alternative, {std::string(kPivot)}, {"XLSX"}, {},
         "structured workbook with manifest"},
        {"csv", K::Exporter, R::Alternative, {std::string(kPivot)}, {"CSV"}, {}, "one CSV file per sheet"},
        {"plantuml", K::Exporter, R::Alternative, {std::string(kPivot)}, {"PUML"}, {}, "PlantUML class diagram"},
    });
    return registry;
}

const Adapter& AdapterRegistry::get(std::string_view id, AdapterKind kind) const {
    for (const auto& a : adapters_) {
        if (a.id == id && a.kind == kind) return a;
    }
    std::string known;
    for (const auto* a : of_kind(kind)) known += (known.empty() ? "" : ", ") + a->id;
    throw Error(ErrorCode::UnknownAdapter, std::string(kind == AdapterKind::Importer ? "importer" : "exporter") +
                                               " '" + std::string(id) + "' is not registered (known: " + known + ")");
}

std::vector<const Adapter*> AdapterRegistry::of_kind(AdapterKind kind) const {
    std::vector<const Adapter*> out;
    for (const auto& a : adapters_) {
        if (a.kind == kind) out.push_back(&a);
    }
    return out;
}

std::string_view to_string(Method method) { return method == Method::Formal ? "formal" : "alternative"; }

std::vector<std::string> MigrationPlan::adapter_ids() const {
    std::vector<std::string> out;
    for (const auto& s : chain) out.push_back(s.adapter);
    return out;
}

bool MigrationPlan::uses(std::string_view adapter) const {
    return std::any_of(chain.begin(), chain.end(), [&](const PlanStep& s) { return s.adapter == adapter; });
}

MigrationPlan plan_migration(std::string_view source, std::string_view target, const CapabilityMatrix& matrix,
                             const AdapterRegistry& registry) {
    const auto& src_platform = matrix.platform(source);
    const auto& tgt_platform = matrix.platform(target);
    const auto& src = src_platform.exports;
    const auto& tgt = tgt_platform.imports;
    if (tgt.data == Level::None) {
        throw Error(ErrorCode::NoViablePath, tgt_platform.name + " cannot import data models");
    }

    MigrationPlan plan;
    plan.source = src_platform.id;
    plan.target = tgt_platform.id;
    const std::string pivot(kPivot);

    // Export side.
    const Adapter* formal = nullptr;
    std::string formal_format;
    if (src.data != Level::None) {
        for (const auto* a : registry.of_kind(AdapterKind::Importer)) {
            if (a->role != AdapterRole::Formal || !serves(*a, plan.source)) continue;
            if (const auto f = accepted(*a, src.formats)) {
                formal = a;
                formal_format = *f;
                break;
            }
        }
    }
    if (formal) {
        plan.export_method = Method::Formal;
        plan.chain.push_back({formal->id, AdapterKind::Importer, formal_format, pivot});
        if (src.data == Level::Partial) {
            plan.expected_losses.add("platform", plan.source, LossReason::AssociationsUnknown, Severity::Warning,
                                     src_platform.name + " exports data models without relationships");
        }
    } else {
        plan.export_method = Method::Alternative;
        if (src.data == Level::Partial) {
            for (const auto* a : registry.of_kind(AdapterKind::Importer)) {
                if (a->role != AdapterRole::Supplement || !serves(*a, plan.source)) continue;
                if (const auto f = accepted(*a, src.formats)) {
                    plan.chain.push_back({a->id, AdapterKind::Importer, *f, pivot});
                    break;
                }
            }
        }
        const Adapter* vision = nullptr;
        for (const auto* a : registry.of_kind(AdapterKind::Importer)) {
            if (a->role == AdapterRole::Alternative) vision = a;
        }
        if (!vision) throw Error(ErrorCode::NoViablePath, "no alternative importer is registered");
        plan.chain.push_back({vision->id, AdapterKind::Importer, vision->inputs.front(), pivot});
    }
    if (src.third_party && plan.chain.front().adapter != "image-llm") {
        plan.expected_losses.add("platform", plan.source, LossReason::ThirdPartyRequired, Severity::Info,
                                 src_platform.name + " needs a third-party application to export");
    }

    // Import side.
    const Adapter* exporter = nullptr;
    std::string produced;
    if (tgt.data == Level::Full) {
        for (const auto* a : registry.of_kind(AdapterKind::Exporter)) {
            if (a->role != AdapterRole::Formal || !serves(*a, plan.target)) continue;
            for (const auto& f : a->outputs) {
                if (has(tgt.formats, f)) {
                    exporter = a;
                    produced = f;
                    break;
                }
            }
            if (exporter) break;
        }
    }
    if (exporter) {
        plan.import_method = Method::Formal;
    } else {
        plan.import_method = Method::Alternative;
        exporter = &registry.get("workbook", AdapterKind::Exporter);
        produced = exporter->outputs.front();
        if (!has(tgt.formats, produced)) {
            plan.expected_losses.add("platform", plan.target, LossReason::TargetFormatMismatch, Severity::Info,
                                     tgt_platform.name + " does not list " + produced +
                                         " as an import format; convert or import the sheets manually");
        }
        if (tgt.data == Level::Partial) {
            plan.expected_losses.add("platform", plan.target, LossReason::AssociationsUnknown, Severity::Warning,
                                     tgt_platform.name + " imports data models without relationships");
        }
    }
    plan.chain.push_back({exporter->id, AdapterKind::Exporter, pivot, produced});
    if (tgt.third_party) {
        plan.expected_losses.add("platform", plan.target, LossReason::ThirdPartyRequired, Severity::Info,
                                 tgt_platform.name + " needs a third-party application to import");
    }
    for (const auto& step : plan.chain) plan.expected_losses.merge(adapter_losses(step.adapter));
    return plan;
}

bool chain_composes(const MigrationPlan& plan) {
    if (plan.chain.empty()) return false;
    bool exporting = false;
    for (std::size_t i = 0; i < plan.chain.size(); ++i) {
        const auto& s = plan.chain[i];
        if (s.kind == AdapterKind::Exporter) {
            if (i == 0 || plan.chain[i - 1].output != kPivot || s.input != kPivot) return false;
            exporting = true;
        } else {
            if (exporting || s.output != kPivot) return false;
        }
    }
    return exporting;
}

nlohmann::ordered_json to_json(const MigrationPlan& plan) {
    nlohmann::ordered_json chain = nlohmann::ordered_json::array();
    for (const auto& s : plan.chain) {
        chain.push_back({{"adapter", s.adapter},
                         {"kind", s.kind == AdapterKind::Importer ? "importer" : "exporter"},
                         {"input", s.input},
                         {"output", s.output}});
    }
    return {{"source", plan.source},
            {"target", plan.target},
            {"export_method", to_string(plan.export_method)},
            {"import_method", to_string(plan.import_method)},
            {"chain", chain},
            {"expected_losses", plan.expected_losses.to_json()}};
}

std::string describe(const MigrationPlan& plan) {
    std::ostringstream out;
    out << plan.source << " -> " << plan.target << "\n";
    out << "export: " << to_string(plan.export_method) << "\n";
    out << "import: " << to_string(plan.import_method) << "\n";
    out << "chain:\n";
    for (const auto& s : plan.chain) out << "  " << s.adapter << " (" << s.input << " -> " << s.output << ")\n";
    if (!plan.expected_losses.empty()) out << "expected losses:\n" << plan.expected_losses.summary();
    return out.str();
}

}  // namespace lcpbridge::orchestrator
