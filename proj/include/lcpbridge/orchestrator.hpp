#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lcpbridge/apex.hpp"
#include "lcpbridge/capabilities.hpp"
#include "lcpbridge/llm.hpp"
#include "lcpbridge/loss_report.hpp"
#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::orchestrator {

/// Format token for the in-memory pivot model passed between adapters.
inline constexpr std::string_view kPivot = "PIVOT";

enum class AdapterKind { Importer, Exporter };

/// Which migration method an adapter implements. Supplement importers read
/// partial exports that only complete an alternative export.
enum class AdapterRole { Formal, Alternative, Supplement };

struct Adapter {
    std::string id;
    AdapterKind kind = AdapterKind::Importer;
    AdapterRole role = AdapterRole::Formal;
    std::vector<std::string> inputs;   ///< accepted format tokens
    std::vector<std::string> outputs;  ///< produced format tokens
    std::vector<std::string> platforms;  ///< platforms whose files it reads, empty for any
    std::string description;
};

class AdapterRegistry {
public:
    static const AdapterRegistry& builtin();

    /// Throws UnknownAdapter.
    const Adapter& get(std::string_view id, AdapterKind kind) const;
    std::vector<const Adapter*> of_kind(AdapterKind kind) const;
    const std::vector<Adapter>& adapters() const { return adapters_; }

    /// Throws InvalidConfig when an id repeats within a kind.
    explicit AdapterRegistry(std::vector<Adapter> adapters);

private:
    std::vector<Adapter> adapters_;
};

enum class Method { Formal, Alternative };
std::string_view to_string(Method method);

struct PlanStep {
    std::string adapter;
    AdapterKind kind = AdapterKind::Importer;
    std::string input;   ///< format consumed, e.g. JSON or PNG
    std::string output;  ///< format produced
};

struct MigrationPlan {
    std::string source;  ///< platform ids
    std::string target;
    Method export_method = Method::Formal;
    Method import_method = Method::Formal;
    std::vector<PlanStep> chain;
    LossReport expected_losses;

    std::vector<std::string> adapter_ids() const;
    bool uses(std::string_view adapter) const;
};

/// Picks the export and import method per the capability matrix. Throws
/// UnknownPlatform, or NoViablePath when the target cannot import data
/// models at all.
MigrationPlan plan_migration(std::string_view source, std::string_view target,
                             const CapabilityMatrix& matrix = CapabilityMatrix::builtin(),
                             const AdapterRegistry& registry = AdapterRegistry::builtin());

/// Losses an adapter always causes, independent of the model.
LossReport adapter_losses(std::string_view adapter);

/// Every step consumes a format the previous one produced (importers after
/// the first may also read their own input files).
bool chain_composes(const MigrationPlan& plan);

nlohmann::ordered_json to_json(const MigrationPlan& plan);
std::string describe(const MigrationPlan& plan);

struct MigrationInputs {
    std::vector<std::filesystem::path> files;   ///< platform exports (.json, .csv, .xlsx)
    std::vector<std::filesystem::path> images;  ///< screenshots (.png, .jpg)
    /// Start from an existing pivot file and skip every import step.
    std::optional<std::filesystem::path> pivot_file;
    llm::VisionModelClient* llm = nullptr;
};

struct ExecuteOptions {
    std::filesystem::path out_dir = "out";
    apex::Dialect dialect = apex::Dialect::Oracle;
    bool sample_row = true;
    /// Re-prompts after an unusable LLM answer.
    int llm_retries = 2;
    /// Called after model.bml is written; the file is read back and
    /// validated again before generation.
    std::function<void(const std::filesystem::path&)> review;
};

struct MigrationOutcome {
    pivot::DomainModel model;
    LossReport losses;  ///< expected and actual items
    std::optional<llm::MergeReport> merge;
    std::vector<std::filesystem::path> files;  ///< everything written, in order
};

/// Runs the plan's adapter chain and writes model.bml, the generator output
/// (model.xlsx with model.xlsx.manifest.json, model.sql, model.puml or CSV
/// files), loss-report.json and, after a merge, merge-report.json into
/// `options.out_dir`. Errors carry the failing step's name.
MigrationOutcome execute_migration(const MigrationPlan& plan, const MigrationInputs& inputs,
                                   const ExecuteOptions& options = {});

/// Pivot file written by execute_migration.
inline constexpr const char* kPivotFile = "model.bml";
inline constexpr const char* kLossReportFile = "loss-report.json";
inline constexpr const char* kMergeReportFile = "merge-report.json";
/// Raw LLM answer kept for manual repair when it cannot be parsed.
inline constexpr const char* kLlmAnswerFile = "llm-answer.puml";

/// Reads and validates a pivot file. Throws UnreadableFile, SyntaxError or
/// ValidationFailed.
pivot::DomainModel read_pivot_file(const std::filesystem::path& path);

}  // namespace lcpbridge::orchestrator
