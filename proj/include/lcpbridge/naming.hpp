#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace lcpbridge {

/// `OrderLine` -> `ORDER_LINE`, `HTTPServer` -> `HTTP_SERVER`, `due_on` -> `DUE_ON`.
std::string upper_snake(std::string_view name);

/// First `digits` hex digits of the 32-bit FNV-1a hash of `text`.
std::string short_hash(std::string_view text, std::size_t digits);

/// `name` unchanged when it fits in `limit`; otherwise its first
/// `limit - digits - 1` characters, `_`, and a hash of the full name.
std::string shorten(std::string_view name, std::size_t limit, std::size_t digits);

}  // namespace lcpbridge
