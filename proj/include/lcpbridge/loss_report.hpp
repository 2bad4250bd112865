#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace lcpbridge {

/// Fixed reason-code enumeration for dropped, degraded or at-risk elements.
enum class LossReason {
    TypeCoerced,
    TypeDefaulted,
    AssociationsUnknown,
    GeneralizationFlattened,
    Renamed,
    Dropped,
    CandidateReference,
    OneToOneAsManyToOne,
    NavigabilityDropped,
    EnumAsText,
    KeySynthesized,
    SampleRowSuppressed,
    UnsupportedConstruct,
    LlmInferred,
    ThirdPartyRequired,
    TargetFormatMismatch,
};

enum class Severity { Info, Warning, Loss };

std::string_view to_string(LossReason reason);
std::string_view to_string(Severity severity);

struct LossItem {
    std::string element_kind;  ///< model, class, property, association, ...
    std::string element_name;
    LossReason reason;
    Severity severity;
    std::string detail;

    bool operator==(const LossItem&) const = default;
};

class LossReport {
public:
    void add(std::string element_kind, std::string element_name, LossReason reason, Severity severity,
             std::string detail = {});

    /// Appends every item of `other` not already present (same kind, name
    /// and reason).
    void merge(const LossReport& other);

    const std::vector<LossItem>& items() const { return items_; }
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    bool contains(LossReason reason) const;
    std::size_t count(LossReason reason) const;

    /// Items sorted by (kind, name, reason) so serialization is stable.
    nlohmann::ordered_json to_json() const;
    static LossReport from_json(const nlohmann::json& doc);

    /// One line per item for the error stream.
    std::string summary() const;

private:
    std::vector<LossItem> items_;
};

}  // namespace lcpbridge
