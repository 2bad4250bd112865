#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

namespace lcpbridge::toml {

/// Reads the TOML subset used by lcpbridge data and config files into a
/// JSON object: `[dotted.table]` headers, bare or quoted keys, and values
/// that are basic strings, booleans, integers or single-line arrays of
/// those. Throws Error(InvalidConfig) with a line number on anything else.
nlohmann::json parse(std::string_view text);

}  // namespace lcpbridge::toml
