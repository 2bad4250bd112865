#include "xml.hpp"

#include <cctype>
#include <charconv>

#include "lcpbridge/error.hpp"

namespace lcpbridge::xlsx::xml {

std::string_view Node::local() const {
    std::string_view n = name;
    const auto colon = n.find(':');
    return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

const Node* Node::child(std::string_view local_name) const {
    for (const auto& c : children) {
        if (c.local() == local_name) return &c;
    }
    return nullptr;
}

std::vector<const Node*> Node::all(std::string_view local_name) const {
    std::vector<const Node*> out;
    for (const auto& c : children) {
        if (c.local() == local_name) out.push_back(&c);
    }
    return out;
}

std::string Node::attribute(std::string_view key, std::string fallback) const {
    for (const auto& [k, v] : attributes) {
        std::string_view kv = k;
        const auto colon = kv.find(':');
        if (kv == key || (colon != std::string_view::npos && kv.substr(colon + 1) == key)) return v;
    }
    return fallback;
}

std::string Node::deep_text() const {
    std::string out = text;
    for (const auto& c : children) out += c.deep_text();
    return out;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::MalformedDocument, "XML: " + what); }

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string decode(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '&') {
            out.push_back(raw[i]);
            continue;
        }
        const auto semi = raw.find(';', i);
        if (semi == std::string_view::npos) fail("unterminated entity");
        const auto entity = raw.substr(i + 1, semi - i - 1);
        if (entity == "lt") out.push_back('<');
        else if (entity == "gt") out.push_back('>');
        else if (entity == "amp") out.push_back('&');
        else if (entity == "quot") out.push_back('"');
        else if (entity == "apos") out.push_back('\'');
        else if (!entity.empty() && entity[0] == '#') {
            const bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
            const auto digits = entity.substr(hex ? 2 : 1);
            unsigned long cp = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (ec != std::errc() || p != digits.data() + digits.size()) fail("bad character reference");
            append_utf8(out, cp);
        } else {
            fail("unknown entity &" + std::string(entity) + ";");
        }
        i = semi;
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Node document() {
        skip_misc();
        if (pos_ >= s_.size() || s_[pos_] != '<') fail("no root element");
        Node root = element();
        skip_misc();
        if (pos_ != s_.size()) fail("content after root element");
        return root;
    }

private:
    bool starts(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

    void skip_until(std::string_view end) {
        const auto at = s_.find(end, pos_);
        if (at == std::string_view::npos) fail("unterminated construct");
        pos_ = at + end.size();
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts("<?")) skip_until("?>");
            else if (starts("<!--")) skip_until("-->");
            else if (starts("<!")) skip_until(">");
            else return;
        }
    }

    std::string name() {
        const auto start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '>' &&
               s_[pos_] != '/' && s_[pos_] != '=') {
            ++pos_;
        }
        if (start == pos_) fail("expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }

    Node element() {
        ++pos_;  // '<'
        Node node;
        node.name = name();
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size()) fail("unterminated tag <" + node.name);
            if (starts("/>")) {
                pos_ += 2;
                return node;
            }
            if (s_[pos_] == '>') {
                ++pos_;
                break;
            }
            auto key = name();
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '=' after attribute " + key);
            ++pos_;
            skip_ws();
            if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("expected quoted value");
            const char quote = s_[pos_++];
            const auto end = s_.find(quote, pos_);
            if (end == std::string_view::npos) fail("unterminated attribute value");
            node.attributes[key] = decode(s_.substr(pos_, end - pos_));
            pos_ = end + 1;
        }
        for (;;) {
            if (pos_ >= s_.size()) fail("unterminated element <" + node.name + ">");
            if (starts("</")) {
                pos_ += 2;
                if (name() != node.name) fail("mismatched closing tag for <" + node.name + ">");
                skip_ws();
                if (pos_ >= s_.size() || s_[pos_] != '>') fail("bad closing tag");
                ++pos_;
                return node;
            }
            if (starts("<!--")) {
                skip_until("-->");
            } else if (starts("<![CDATA[")) {
                const auto start = pos_ + 9;
                skip_until("]]>");
                node.text += s_.substr(start, pos_ - 3 - start);
            } else if (starts("<?")) {
                skip_until("?>");
            } else if (s_[pos_] == '<') {
                node.children.push_back(element());
            } else {
                const auto end = s_.find('<', pos_);
                if (end == std::string_view::npos) fail("unterminated element <" + node.name + ">");
                node.text += decode(s_.substr(pos_, end - pos_));
                pos_ = end;
            }
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Node parse(std::string_view text) { return Parser(text).document(); }

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const char ch : text) {
        const auto u = static_cast<unsigned char>(ch);
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default:
                if (u < 0x20 && ch != '\t' && ch != '\n' && ch != '\r') break;
                out.push_back(ch);
        }
    }
    return out;
}

}  // namespace lcpbridge::xlsx::xml
