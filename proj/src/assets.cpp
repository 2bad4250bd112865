#include "lcpbridge/assets.hpp"

#include <utility>
#include <vector>

namespace lcpbridge {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_assets();
}

std::optional<std::string_view> embedded_asset(std::string_view relative_path) {
    for (const auto& [path, content] : detail::embedded_assets()) {
        if (path == relative_path) return content;
    }
    return std::nullopt;
}

}  // namespace lcpbridge
