#include "lcpbridge/toml_lite.hpp"

#include <cctype>
#include <sstream>
#include <string>

#include "lcpbridge/error.hpp"

namespace lcpbridge::toml {

namespace {

class LineParser {
public:
    LineParser(std::string_view text, std::size_t line_no) : s_(text), line_no_(line_no) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no_) + ": " + what);
    }

    void ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool at_end_or_comment() {
        ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }

    bool eat(char ch) {
        ws();
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string key() {
        ws();
        if (pos_ < s_.size() && s_[pos_] == '"') return basic_string();
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-')) {
            ++pos_;
        }
        if (start == pos_) fail("expected a key");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::vector<std::string> dotted_key() {
        std::vector<std::string> parts{key()};
        while (eat('.')) parts.push_back(key());
        return parts;
    }

    std::string basic_string() {
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char ch = s_[pos_++];
            if (ch == '\\') {
                if (pos_ >= s_.size()) break;
                const char esc = s_[pos_++];
                switch (esc) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail(std::string("unsupported escape \\") + esc);
                }
            } else {
                out.push_back(ch);
            }
        }
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    nlohmann::json value() {
        ws();
        if (pos_ >= s_.size()) fail("missing value");
        const char ch = s_[pos_];
        if (ch == '"') return basic_string();
        if (ch == '[') {
            ++pos_;
            nlohmann::json arr = nlohmann::json::array();
            if (eat(']')) return arr;
            do {
                arr.push_back(value());
            } while (eat(',') && !peek_is(']'));
            if (!eat(']')) fail("expected ']'");
            return arr;
        }
        const std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != ',' &&
               s_[pos_] != ']' && s_[pos_] != '#') {
            ++pos_;
        }
        const std::string word(s_.substr(start, pos_ - start));
        if (word == "true") return true;
        if (word == "false") return false;
        try {
            std::size_t used = 0;
            const long long n = std::stoll(word, &used);
            if (used == word.size()) return n;
        } catch (const std::exception&) {
        }
        fail("unsupported value '" + word + "'");
    }

    bool peek_is(char ch) {
        ws();
        return pos_ < s_.size() && s_[pos_] == ch;
    }

private:
    std::string_view s_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

nlohmann::json& descend(nlohmann::json& root, const std::vector<std::string>& path, const LineParser& p) {
    nlohmann::json* node = &root;
    for (const auto& part : path) {
        auto& child = (*node)[part];
        if (child.is_null()) child = nlohmann::json::object();
        if (!child.is_object()) p.fail("key '" + part + "' is not a table");
        node = &child;
    }
    return *node;
}

}  // namespace

nlohmann::json parse(std::string_view text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        LineParser p(line, line_no);
        if (p.at_end_or_comment()) continue;
        if (p.eat('[')) {
            const auto path = p.dotted_key();
            if (!p.eat(']')) p.fail("expected ']'");
            if (!p.at_end_or_comment()) p.fail("trailing characters after table header");
            table = &descend(root, path, p);
            continue;
        }
        auto path = p.dotted_key();
        if (!p.eat('=')) p.fail("expected '='");
        nlohmann::json v = p.value();
        if (!p.at_end_or_comment()) p.fail("trailing characters after value");
        const std::string leaf = path.back();
        path.pop_back();
        auto& target = descend(*table, path, p);
        if (target.contains(leaf)) p.fail("duplicate key '" + leaf + "'");
        target[leaf] = std::move(v);
    }
    return root;
}

}  // namespace lcpbridge::toml
