#include <algorithm>

#include "lcpbridge/assets.hpp"
#include "lcpbridge/capabilities.hpp"
#include "lcpbridge/error.hpp"
#include "lcpbridge/pivot/model.hpp"
#include "lcpbridge/toml_lite.hpp"

namespace lcpbridge::orchestrator {

namespace {

Level parse_level(const nlohmann::json& node, const std::string& where) {
    if (!node.is_string()) throw Error(ErrorCode::InvalidConfig, where + ": level must be a string");
    const auto s = node.get<std::string>();
    if (s == "none") return Level::None;
    if (s == "partial") return Level::Partial;
    if (s == "full") return Level::Full;
    throw Error(ErrorCode::InvalidConfig, where + ": unknown level '" + s + "'");
}

CapabilityRecord parse_record(const nlohmann::json& node, const std::string& where) {
    if (!node.is_object()) throw Error(ErrorCode::InvalidConfig, "missing table [" + where + "]");
    CapabilityRecord r;
    const auto level = [&](const char* key) {
        if (!node.contains(key)) throw Error(ErrorCode::InvalidConfig, where + ": missing '" + key + "'");
        return parse_level(node.at(key), where + "." + key);
    };
    r.data = level("data");
    r.gui = level("gui");
    r.behavior = level("behavior");
    if (node.contains("third_party")) {
        if (!node.at("third_party").is_boolean()) {
            throw Error(ErrorCode::InvalidConfig, where + ".third_party must be a boolean");
        }
        r.third_party = node.at("third_party").get<bool>();
    }
    if (node.contains("formats")) {
        if (!node.at("formats").is_array()) throw Error(ErrorCode::InvalidConfig, where + ".formats must be an array");
        for (const auto& f : node.at("formats")) {
            const auto token = f.is_string() ? f.get<std::string>() : std::string();
            if (std::find(std::begin(kFormats), std::end(kFormats), token) == std::end(kFormats)) {
                throw Error(ErrorCode::InvalidConfig, where + ": unknown format '" + f.dump() + "'");
            }
            r.formats.push_back(token);
        }
    }
    return r;
}

}  // namespace

std::string_view to_string(Level level) {
    switch (level) {
        case Level::None: return "none";
        case Level::Partial: return "partial";
        case Level::Full: return "full";
    }
    return "";
}

std::string_view to_string(Direction direction) { return direction == Direction::Export ? "export" : "import"; }

const CapabilityMatrix& CapabilityMatrix::builtin() {
    static const CapabilityMatrix matrix = from_toml(*embedded_asset("capabilities.toml"));
    return matrix;
}

CapabilityMatrix CapabilityMatrix::from_toml(std::string_view text) {
    const auto doc = toml::parse(text);
    CapabilityMatrix m;
    for (const auto& [id, node] : doc.items()) {
        if (!node.is_object()) throw Error(ErrorCode::InvalidConfig, "top-level key '" + id + "' is not a table");
        PlatformCapabilities p;
        p.id = pivot::to_lower(id);
        p.name = node.contains("name") && node.at("name").is_string() ? node.at("name").get<std::string>() : id;
        p.exports = parse_record(node.contains("export") ? node.at("export") : nlohmann::json(), id + ".export");
        p.imports = parse_record(node.contains("import") ? node.at("import") : nlohmann::json(), id + ".import");
        if (m.contains(p.id)) throw Error(ErrorCode::InvalidConfig, "platform '" + id + "' declared twice");
        m.platforms_.push_back(std::move(p));
    }
    return m;
}

bool CapabilityMatrix::contains(std::string_view id) const {
    return std::any_of(platforms_.begin(), platforms_.end(), [&](const auto& p) { return pivot::iequals(p.id, id); });
}

const PlatformCapabilities& CapabilityMatrix::platform(std::string_view id) const {
    for (const auto& p : platforms_) {
        if (pivot::iequals(p.id, id)) return p;
    }
    std::string known;
    for (const auto& p : platforms_) known += (known.empty() ? "" : ", ") + p.id;
    throw Error(ErrorCode::UnknownPlatform, "unknown platform '" + std::string(id) + "' (known: " + known + ")");
}

const CapabilityRecord& CapabilityMatrix::query(std::string_view id, Direction direction) const {
    const auto& p = platform(id);
    return direction == Direction::Export ? p.exports : p.imports;
}

}  // namespace lcpbridge::orchestrator
