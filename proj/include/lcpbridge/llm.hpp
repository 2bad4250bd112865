#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcpbridge/capabilities.hpp"
#include "lcpbridge/loss_report.hpp"
#include "lcpbridge/pivot/model.hpp"

namespace lcpbridge::llm {

struct PromptContext {
    std::string platform_id;
    std::string syntax_description;  ///< how the platform draws its data model
    std::string extra_instructions;
};

/// Context for `platform_id` with the shipped notation text for that
/// platform (`prompts/<id>.txt`, falling back to `prompts/generic.txt`).
/// Throws UnknownPlatform.
PromptContext prompt_context(std::string_view platform_id,
                             const orchestrator::CapabilityMatrix& registry = orchestrator::CapabilityMatrix::builtin());

/// Prompt asking for a single PlantUML block. With `partial`, the partial
/// model is embedded as PlantUML and the answer must keep its elements and
/// add the missing ones. Throws UnknownPlatform.
std::string build_prompt(const PromptContext& context, const pivot::DomainModel* partial = nullptr,
                         const orchestrator::CapabilityMatrix& registry = orchestrator::CapabilityMatrix::builtin());

struct Image {
    std::string bytes;
    std::string media_type;  ///< image/png or image/jpeg
};

/// Media type from the file signature. Throws UnsupportedImage.
std::string sniff_media_type(std::string_view bytes);

/// Throws UnreadableFile or UnsupportedImage.
Image load_image(const std::filesystem::path& path);

struct VisionRequest {
    std::string prompt_text;
    std::vector<Image> images;
};

/// Lower-case hex SHA-256 over the prompt and every image, each part
/// prefixed with its length so that different splits never collide.
std::string request_digest(const VisionRequest& request);

class VisionModelClient {
public:
    virtual ~VisionModelClient() = default;
    /// Raw completion text. Throws TransportFailure, MissingFixture or
    /// AuthenticationFailure.
    virtual std::string complete(const VisionRequest& request) = 0;
};

/// Returns `<dir>/<digest>.txt` byte for byte.
class ReplayClient : public VisionModelClient {
public:
    /// Throws InvalidConfig when `dir` is not a directory.
    explicit ReplayClient(std::filesystem::path dir);
    std::string complete(const VisionRequest& request) override;

    /// Where the completion for `request` is looked up.
    std::filesystem::path fixture_path(const VisionRequest& request) const;

private:
    std::filesystem::path dir_;
};

struct LiveConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o";
    std::string api_key;
    std::chrono::seconds timeout{120};
};

/// Environment variable read by `api_key_from_env`.
inline constexpr const char* kApiKeyVariable = "LCPB_LLM_API_KEY";
std::string api_key_from_env();

/// Chat-completions client: one user message holding the prompt and each
/// image as a base64 data URI.
class LiveClient : public VisionModelClient {
public:
    explicit LiveClient(LiveConfig config);
    /// Throws NoCredentials before any network traffic when the key is empty.
    std::string complete(const VisionRequest& request) override;

    /// JSON request body sent for `request`.
    std::string request_body(const VisionRequest& request) const;

private:
    LiveConfig config_;
};

/// Validates the request, then delegates to `client`.
std::string invoke_vision_model(const VisionRequest& request, VisionModelClient& client);

struct Extraction {
    pivot::DomainModel model;
    std::string block;  ///< the PlantUML block that was parsed
    LossReport losses;
};

/// Parses the first @startuml..@enduml block of `completion`. Further
/// blocks are ignored with a warning. Throws NoPlantUmlBlock; parse errors
/// keep their code and carry the block as attachment.
Extraction extract_model(std::string_view completion, std::string_view model_name = "Model");

struct MergeConflict {
    std::string element;  ///< `Class.property` or enumeration name
    std::string partial_value;
    std::string inferred_value;
    std::string resolution = "PARTIAL_WINS";

    bool operator==(const MergeConflict&) const = default;
};

struct MergeReport {
    std::vector<std::string> added_classes;
    std::vector<std::string> added_properties;  ///< `Class.property`
    std::vector<std::string> added_enumerations;
    std::vector<std::string> added_associations;
    std::vector<std::string> added_generalizations;  ///< `General <|-- Specific`
    std::vector<MergeConflict> conflicts;
    std::vector<std::string> skipped;  ///< inferred elements that could not be added, with the reason

    bool empty() const;
};

nlohmann::ordered_json to_json(const MergeReport& report);

struct MergeResult {
    pivot::DomainModel model;
    MergeReport report;
};

/// Keeps every element of `partial` unchanged and adds what only
/// `inferred` has. Names match ignoring case; on a type conflict the
/// partial side wins and the conflict is recorded. The result is valid.
MergeResult merge_models(const pivot::DomainModel& partial, const pivot::DomainModel& inferred);

}  // namespace lcpbridge::llm
