#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "lcpbridge/error.hpp"
#include "lcpbridge/llm.hpp"

namespace lcpbridge::llm {

namespace fs = std::filesystem;

std::string sniff_media_type(std::string_view bytes) {
    static constexpr std::string_view kPng = "\x89PNG\r\n\x1a\n";
    if (bytes.substr(0, kPng.size()) == kPng) return "image/png";
    if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xff\xd8\xff") return "image/jpeg";
    throw Error(ErrorCode::UnsupportedImage, "image is neither PNG nor JPEG");
}

Image load_image(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read image " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), {});
    try {
        auto type = sniff_media_type(bytes);
        return {std::move(bytes), std::move(type)};
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string request_digest(const VisionRequest& request) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    const auto part = [&](std::string_view tag, std::string_view data) {
        const auto header = std::string(tag) + ":" + std::to_string(data.size()) + "\n";
        EVP_DigestUpdate(ctx.get(), header.data(), header.size());
        EVP_DigestUpdate(ctx.get(), data.data(), data.size());
    };
    part("prompt", request.prompt_text);
    for (const auto& image : request.images) part("image", image.bytes);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &length);
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

ReplayClient::ReplayClient(fs::path dir) : dir_(std::move(dir)) {
    if (!fs::is_directory(dir_)) throw Error(ErrorCode::InvalidConfig, "replay directory " + dir_.string() + " does not exist");
}

fs::path ReplayClient::fixture_path(const VisionRequest& request) const {
    return dir_ / (request_digest(request) + ".txt");
}

std::string ReplayClient::complete(const VisionRequest& request) {
    const auto path = fixture_path(request);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::MissingFixture,
                    "no replay fixture " + path.filename().string() + " in " + dir_.string());
    }
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

std::string api_key_from_env() {
    const char* key = std::getenv(kApiKeyVariable);
    return key ? key : "";
}

std::string invoke_vision_model(const VisionRequest& request, VisionModelClient& client) {
    if (request.images.empty()) throw Error(ErrorCode::MissingInput, "vision request has no image");
    return client.complete(request);
}

}  // namespace lcpbridge::llm
