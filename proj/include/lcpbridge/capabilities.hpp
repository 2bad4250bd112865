#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lcpbridge::orchestrator {

enum class Level { None, Partial, Full };
enum class Direction { Export, Import };

std::string_view to_string(Level level);
std::string_view to_string(Direction direction);

/// Format tokens a platform can read or write a model in.
inline constexpr std::string_view kFormats[] = {"JSON", "XLSX", "CSV", "XML", "DS", "SQL"};

/// Support for one direction of one platform.
struct CapabilityRecord {
    Level data = Level::None;
    Level gui = Level::None;
    Level behavior = Level::None;
    bool third_party = false;  ///< needs a third-party application
    std::vector<std::string> formats;

    bool operator==(const CapabilityRecord&) const = default;
};

struct PlatformCapabilities {
    std::string id;    ///< lower-case key, e.g. `powerapps`
    std::string name;  ///< display name, e.g. `PowerApps`
    CapabilityRecord exports;
    CapabilityRecord imports;
};

class CapabilityMatrix {
public:
    /// The matrix compiled into the library.
    static const CapabilityMatrix& builtin();

    /// Reads `capabilities.toml` style text. Throws InvalidConfig on an
    /// unknown level or format token, or a missing direction.
    static CapabilityMatrix from_toml(std::string_view text);

    /// Throws UnknownPlatform. Lookup ignores case.
    const PlatformCapabilities& platform(std::string_view id) const;
    const CapabilityRecord& query(std::string_view id, Direction direction) const;
    bool contains(std::string_view id) const;

    const std::vector<PlatformCapabilities>& platforms() const { return platforms_; }

private:
    std::vector<PlatformCapabilities> platforms_;
};

}  // namespace lcpbridge::orchestrator
