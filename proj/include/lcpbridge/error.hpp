#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lcpbridge {

/// Machine-readable failure categories. Every exception thrown by the
/// library carries one of these so callers (and the CLI exit-code mapping)
/// can distinguish failures without parsing messages.
enum class ErrorCode {
    SyntaxError,
    ValidationFailed,
    MissingMarkers,
    MultipleBlocks,
    MalformedMultiplicity,
    EmptyName,
    MalformedDocument,
    MissingField,
    DanglingReference,
    UnreadableFile,
    EmptyFile,
    DuplicateHeader,
    DuplicateTable,
    UnknownPlatform,
    UnknownAdapter,
    TransportFailure,
    MissingFixture,
    NoCredentials,
    AuthenticationFailure,
    NoPlantUmlBlock,
    UnsupportedImage,
    NameCollision,
    UnwritablePath,
    InvalidManifest,
    NoViablePath,
    MissingInput,
    InvalidConfig,
    InvalidModel,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// Pipeline step that raised the error, empty when raised outside a
    /// migration pipeline.
    const std::string& step() const noexcept { return step_; }
    void set_step(std::string step) { step_ = std::move(step); }

    /// Free-form payload kept for human repair (e.g. the PlantUML block an
    /// LLM produced when it failed to parse).
    const std::string& attachment() const noexcept { return attachment_; }
    void set_attachment(std::string text) { attachment_ = std::move(text); }

private:
    ErrorCode code_;
    std::string step_;
    std::string attachment_;
};

}  // namespace lcpbridge
