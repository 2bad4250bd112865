#include "lcpbridge/naming.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>

namespace lcpbridge {

std::string upper_snake(std::string_view name) {
    std::string out;
    auto push_sep = [&] {
        if (!out.empty() && out.back() != '_') out.push_back('_');
    };
    for (std::size_t i = 0; i < name.size(); ++i) {
        const auto c = static_cast<unsigned char>(name[i]);
        if (!std::isalnum(c)) {
            push_sep();
            continue;
        }
        if (std::isupper(c) && i > 0) {
            const auto prev = static_cast<unsigned char>(name[i - 1]);
            const bool next_lower = i + 1 < name.size() && std::islower(static_cast<unsigned char>(name[i + 1]));
            if (std::islower(prev) || std::isdigit(prev) || (std::isupper(prev) && next_lower)) push_sep();
        }
        out.push_back(static_cast<char>(std::toupper(c)));
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

std::string short_hash(std::string_view text, std::size_t digits) {
    std::uint32_t h = 2166136261u;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 16777619u;
    }
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08X", static_cast<unsigned>(h));
    return std::string(buf, digits < 8 ? digits : 8);
}

std::string shorten(std::string_view name, std::size_t limit, std::size_t digits) {
    if (name.size() <= limit) return std::string(name);
    std::string head(name.substr(0, limit - digits - 1));
    return head + "_" + short_hash(name, digits);
}

}  // namespace lcpbridge
