#pragma once

// Small non-validating XML reader for the package parts we read back.
// Namespaces are not resolved; use local() to drop prefixes.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace lcpbridge::xlsx::xml {

struct Node {
    std::string name;
    std::map<std::string, std::string> attributes;
    std::vector<Node> children;
    std::string text;  ///< concatenated character data directly inside this node

    std::string_view local() const;
    const Node* child(std::string_view local_name) const;
    std::vector<const Node*> all(std::string_view local_name) const;
    std::string attribute(std::string_view key, std::string fallback = {}) const;
    /// Text of this node and all descendants.
    std::string deep_text() const;
};

/// Parses a document and returns its root element. Throws MalformedDocument.
Node parse(std::string_view text);

/// Escapes &, <, > and quotes, dropping characters XML 1.0 cannot carry.
std::string escape(std::string_view text);

}  // namespace lcpbridge::xlsx::xml
