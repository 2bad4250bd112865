#include "lcpbridge/loss_report.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "lcpbridge/error.hpp"

namespace lcpbridge {

namespace {

constexpr LossReason kReasons[] = {
    LossReason::TypeCoerced,        LossReason::TypeDefaulted,        LossReason::AssociationsUnknown,
    LossReason::GeneralizationFlattened, LossReason::Renamed,         LossReason::Dropped,
    LossReason::CandidateReference, LossReason::OneToOneAsManyToOne,  LossReason::NavigabilityDropped,
    LossReason::EnumAsText,         LossReason::KeySynthesized,       LossReason::SampleRowSuppressed,
    LossReason::UnsupportedConstruct, LossReason::LlmInferred,        LossReason::ThirdPartyRequired,
    LossReason::TargetFormatMismatch,
};

constexpr Severity kSeverities[] = {Severity::Info, Severity::Warning, Severity::Loss};

template <typename Enum, std::size_t N>
Enum parse_enum(const Enum (&all)[N], const std::string& text, const char* what) {
    for (Enum e : all) {
        if (to_string(e) == text) return e;
    }
    throw Error(ErrorCode::MalformedDocument, std::string("unknown ") + what + " '" + text + "'");
}

}  // namespace

std::string_view to_string(LossReason reason) {
    switch (reason) {
        case LossReason::TypeCoerced: return "TYPE_COERCED";
        case LossReason::TypeDefaulted: return "TYPE_DEFAULTED";
        case LossReason::AssociationsUnknown: return "ASSOCIATIONS_UNKNOWN";
        case LossReason::GeneralizationFlattened: return "GENERALIZATION_FLATTENED";
        case LossReason::Renamed: return "RENAMED";
        case LossReason::Dropped: return "DROPPED";
        case LossReason::CandidateReference: return "CANDIDATE_REFERENCE";
        case LossReason::OneToOneAsManyToOne: return "ONE_TO_ONE_AS_MANY_TO_ONE";
        case LossReason::NavigabilityDropped: return "NAVIGABILITY_DROPPED";
        case LossReason::EnumAsText: return "ENUM_AS_TEXT";
        case LossReason::KeySynthesized: return "KEY_SYNTHESIZED";
        case LossReason::SampleRowSuppressed: return "SAMPLE_ROW_SUPPRESSED";
        case LossReason::UnsupportedConstruct: return "UNSUPPORTED_CONSTRUCT";
        case LossReason::LlmInferred: return "LLM_INFERRED";
        case LossReason::ThirdPartyRequired: return "THIRD_PARTY_REQUIRED";
        case LossReason::TargetFormatMismatch: return "TARGET_FORMAT_MISMATCH";
    }
    return "UNKNOWN";
}

std::string_view to_string(Severity severity) {
    switch (severity) {
        case Severity::Info: return "info";
        case Severity::Warning: return "warning";
        case Severity::Loss: return "loss";
    }
    return "info";
}

void LossReport::add(std::string element_kind, std::string element_name, LossReason reason, Severity severity,
                     std::string detail) {
    items_.push_back({std::move(element_kind), std::move(element_name), reason, severity, std::move(detail)});
}

void LossReport::merge(const LossReport& other) {
    for (const auto& item : other.items_) {
        const bool present = std::any_of(items_.begin(), items_.end(), [&](const LossItem& mine) {
            return mine.element_kind == item.element_kind && mine.element_name == item.element_name &&
                   mine.reason == item.reason;
        });
        if (!present) items_.push_back(item);
    }
}

bool LossReport::contains(LossReason reason) const { return count(reason) > 0; }

std::size_t LossReport::count(LossReason reason) const {
    return static_cast<std::size_t>(
        std::count_if(items_.begin(), items_.end(), [reason](const LossItem& i) { return i.reason == reason; }));
}

nlohmann::ordered_json LossReport::to_json() const {
    std::vector<const LossItem*> sorted;
    for (const auto& item : items_) sorted.push_back(&item);
    std::stable_sort(sorted.begin(), sorted.end(), [](const LossItem* a, const LossItem* b) {
        return std::tuple(a->element_kind, a->element_name, to_string(a->reason)) <
               std::tuple(b->element_kind, b->element_name, to_string(b->reason));
    });
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const auto* item : sorted) {
        nlohmann::ordered_json j;
        j["element_kind"] = item->element_kind;
        j["element_name"] = item->element_name;
        j["reason"] = to_string(item->reason);
        j["severity"] = to_string(item->severity);
        j["detail"] = item->detail;
        items.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["items"] = std::move(items);
    return doc;
}

LossReport LossReport::from_json(const nlohmann::json& doc) {
    LossReport report;
    if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array()) {
        throw Error(ErrorCode::MalformedDocument, "loss report must be an object with an 'items' array");
    }
    for (const auto& j : doc["items"]) {
        try {
            report.add(j.at("element_kind").get<std::string>(), j.at("element_name").get<std::string>(),
                       parse_enum(kReasons, j.at("reason").get<std::string>(), "reason code"),
                       parse_enum(kSeverities, j.at("severity").get<std::string>(), "severity"),
                       j.value("detail", std::string{}));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedDocument, std::string("bad loss report item: ") + e.what());
        }
    }
    return report;
}

std::string LossReport::summary() const {
    std::ostringstream out;
    for (const auto& item : items_) {
        out << '[' << to_string(item.severity) << "] " << to_string(item.reason) << ' ' << item.element_kind << ' '
            << item.element_name;
        if (!item.detail.empty()) out << ": " << item.detail;
        out << '\n';
    }
    return out.str();
}

}  // namespace lcpbridge
