#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <openssl/evp.h>

#include <regex>

#include "lcpbridge/error.hpp"
#include "lcpbridge/llm.hpp"

namespace lcpbridge::llm {

namespace {

std::string base64(std::string_view bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

struct Endpoint {
    std::string origin;  ///< scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    static const std::regex re(R"((https?://[^/]+)(/.*)?)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) throw Error(ErrorCode::InvalidConfig, "malformed LLM endpoint '" + url + "'");
    return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

}  // namespace

LiveClient::LiveClient(LiveConfig config) : config_(std::move(config)) { split_endpoint(config_.endpoint); }

std::string LiveClient::request_body(const VisionRequest& request) const {
    nlohmann::json content = nlohmann::json::array();
    content.push_back({{"type", "text"}, {"text", request.prompt_text}});
    for (const auto& image : request.images) {
        content.push_back({{"type", "image_url"},
                           {"image_url", {{"url", "data:" + image.media_type + ";base64," + base64(image.bytes)}}}});
    }
    nlohmann::json body = {{"model", config_.model},
                           {"messages", nlohmann::json::array({{{"role", "user"}, {"content", content}}})},
                           {"temperature", 0}};
    return body.dump();
}

std::string LiveClient::complete(const VisionRequest& request) {
    if (config_.api_key.empty()) {
        throw Error(ErrorCode::NoCredentials,
                    std::string("no API key for the live LLM client; set ") + kApiKeyVariable);
    }
    const auto endpoint = split_endpoint(config_.endpoint);
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_bearer_token_auth(config_.api_key);
    auto res = client.Post(endpoint.path, request_body(request), "application/json");
    if (!res) {
        throw Error(ErrorCode::TransportFailure,
                    "request to " + config_.endpoint + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 401 || res->status == 403) {
        throw Error(ErrorCode::AuthenticationFailure,
                    "LLM endpoint rejected the API key (HTTP " + std::to_string(res->status) + ")");
    }
    if (res->status != 200) {
        throw Error(ErrorCode::TransportFailure,
                    "LLM endpoint answered HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    try {
        const auto doc = nlohmann::json::parse(res->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::TransportFailure, std::string("unexpected LLM response: ") + e.what());
    }
}

}  // namespace lcpbridge::llm
