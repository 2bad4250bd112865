#pragma once

#include <optional>
#include <string_view>

namespace lcpbridge {

/// Data files compiled into the library (`assets/` in the source tree),
/// looked up by relative path such as `capabilities.toml` or
/// `prompts/powerapps.txt`.
std::optional<std::string_view> embedded_asset(std::string_view relative_path);

}  // namespace lcpbridge
