#include "lcpbridge/error.hpp"

namespace lcpbridge {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
        case ErrorCode::ValidationFailed: return "VALIDATION_FAILED";
        case ErrorCode::MissingMarkers: return "MISSING_MARKERS";
        case ErrorCode::MultipleBlocks: return "MULTIPLE_BLOCKS";
        case ErrorCode::MalformedMultiplicity: return "MALFORMED_MULTIPLICITY";
        case ErrorCode::EmptyName: return "EMPTY_NAME";
        case ErrorCode::MalformedDocument: return "MALFORMED_DOCUMENT";
        case ErrorCode::MissingField: return "MISSING_FIELD";
        case ErrorCode::DanglingReference: return "DANGLING_REFERENCE";
        case ErrorCode::UnreadableFile: return "UNREADABLE_FILE";
        case ErrorCode::EmptyFile: return "EMPTY_FILE";
        case ErrorCode::DuplicateHeader: return "DUPLICATE_HEADER";
        case ErrorCode::DuplicateTable: return "DUPLICATE_TABLE";
        case ErrorCode::UnknownPlatform: return "UNKNOWN_PLATFORM";
        case ErrorCode::UnknownAdapter: return "UNKNOWN_ADAPTER";
        case ErrorCode::TransportFailure: return "TRANSPORT_FAILURE";
        case ErrorCode::MissingFixture: return "MISSING_FIXTURE";
        case ErrorCode::NoCredentials: return "NO_CREDENTIALS";
        case ErrorCode::AuthenticationFailure: return "AUTHENTICATION_FAILURE";
        case ErrorCode::NoPlantUmlBlock: return "NO_PLANTUML_BLOCK";
        case ErrorCode::UnsupportedImage: return "UNSUPPORTED_IMAGE";
        case ErrorCode::NameCollision: return "NAME_COLLISION";
        case ErrorCode::UnwritablePath: return "UNWRITABLE_PATH";
        case ErrorCode::InvalidManifest: return "INVALID_MANIFEST";
        case ErrorCode::NoViablePath: return "NO_VIABLE_PATH";
        case ErrorCode::MissingInput: return "MISSING_INPUT";
        case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
        case ErrorCode::InvalidModel: return "INVALID_MODEL";
    }
    return "UNKNOWN";
}

}  // namespace lcpbridge
