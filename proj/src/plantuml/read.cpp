#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "lcpbridge/error.hpp"
#include "lcpbridge/plantuml.hpp"

namespace lcpbridge::plantuml {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

bool starts_with_word(const std::string& line, std::string_view word) {
    if (line.size() < word.size() || line.compare(0, word.size(), word) != 0) return false;
    return line.size() == word.size() || !std::isalnum(static_cast<unsigned char>(line[word.size()]));
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string current;
    std::istringstream in{std::string(text)};
    while (std::getline(in, current)) {
        if (!current.empty() && current.back() == '\r') current.pop_back();
        lines.push_back(current);
    }
    return lines;
}

std::string unquote(std::string s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

// NAME is either a quoted string or a run of word characters and dots.
const std::string kName = R"(("[^"]*"|[\w.]+))";

const std::regex& class_re() {
    static const std::regex re(
        R"(^(?:abstract\s+class|abstract|class|entity|interface)\s+)" + kName +
        R"((?:\s+as\s+\w+)?(?:\s+extends\s+)" + kName + R"()?\s*(?:<<[^>]*>>)?\s*(\{.*)?$)");
    return re;
}

const std::regex& enum_re() {
    static const std::regex re(R"(^enum\s+)" + kName + R"(\s*(?:<<[^>]*>>)?\s*(\{.*)?$)");
    return re;
}

const std::regex& relation_re() {
    // left ["label"] arrow ["label"] right [: name]
    static const std::regex re(R"(^)" + kName + R"(\s*("[^"]*")?\s*(<\|?|\*|o)?(-+|\.+)(\|?>|\*(?=[\s"])|o(?=[\s"]))?\s*("[^"]*")?\s*)" +
                               kName + R"(\s*(?::\s*(.*))?$)");
    return re;
}

bool is_separator(const std::string& line) {
    static const std::regex re(R"(^(--+|==+|\.\.+|__+)(.*(--+|==+|\.\.+|__+))?$)");
    return std::regex_match(line, re);
}

class Reader {
public:
    explicit Reader(std::vector<std::string> lines, std::size_t first_line)
        : lines_(std::move(lines)), first_line_(first_line) {}

    void run(PlantUmlDocument& doc) {
        for (i_ = 0; i_ < lines_.size(); ++i_) top_level(doc);
    }

private:
    std::size_t line_no() const { return first_line_ + i_; }

    void skip(PlantUmlDocument& doc, const std::string& text, std::string reason) {
        doc.skipped.push_back({line_no(), text, std::move(reason)});
    }

    /// Skips lines until one satisfying `is_end` (inclusive).
    template <typename Pred>
    void skip_until(PlantUmlDocument& doc, Pred is_end, const std::string& reason) {
        while (++i_ < lines_.size()) {
            const std::string line = trim(lines_[i_]);
            if (!line.empty()) skip(doc, line, reason);
            if (is_end(line)) return;
        }
    }

    void top_level(PlantUmlDocument& doc) {
        const std::string line = trim(lines_[i_]);
        if (line.empty()) return;
        std::smatch m;
        if (line.front() == '\'') {
            skip(doc, line, "comment");
        } else if (line.rfind("/'", 0) == 0) {
            skip(doc, line, "comment");
            if (line.find("'/", 2) == std::string::npos) {
                skip_until(doc, [](const std::string& l) { return l.find("'/") != std::string::npos; }, "comment");
            }
        } else if (starts_with_word(line, "note")) {
            skip(doc, line, "note");
            if (line.find(':') == std::string::npos) {
                skip_until(doc, [](const std::string& l) { return l.rfind("end note", 0) == 0 || l == "endnote"; }, "note");
            }
        } else if (starts_with_word(line, "skinparam") || starts_with_word(line, "style")) {
            skip(doc, line, "styling");
            if (!line.empty() && line.back() == '{') {
                skip_until(doc, [](const std::string& l) { return l == "}"; }, "styling");
            }
        } else if (std::regex_match(line, m, enum_re())) {
            enum_decl(doc, m);
        } else if (std::regex_match(line, m, class_re())) {
            class_decl(doc, m);
        } else if (std::regex_match(line, m, relation_re())) {
            relation(doc, m, line);
        } else {
            skip(doc, line, "unsupported construct");
        }
    }

    /// Attribute parts of a `{ ... }` tail. `closed` is set when the tail
    /// also closes the body (more `}` than `{`, so `{id}` markers don't count).
    static std::vector<std::string> inline_body(const std::string& brace_part, bool& closed) {
        std::string body = brace_part.substr(1);
        const auto opens = std::count(body.begin(), body.end(), '{');
        const auto closes = std::count(body.begin(), body.end(), '}');
        closed = closes > opens;
        if (closed) body = body.substr(0, body.find_last_of('}'));
        std::vector<std::string> parts;
        std::string part;
        std::istringstream in(body);
        while (std::getline(in, part, ';')) {
            part = trim(part);
            if (!part.empty()) parts.push_back(part);
        }
        return parts;
    }

    void class_decl(PlantUmlDocument& doc, const std::smatch& m) {
        ClassDecl decl;
        decl.name = unquote(m[1].str());
        decl.extends = m[2].matched ? unquote(m[2].str()) : "";
        decl.line = line_no();
        if (m[3].matched) {
            bool closed = false;
            for (const auto& part : inline_body(m[3].str(), closed)) attribute(doc, decl, part);
            if (!closed) {
                while (++i_ < lines_.size()) {
                    const std::string line = trim(lines_[i_]);
                    if (line == "}") break;
                    if (!line.empty()) attribute(doc, decl, line);
                }
            }
        }
        doc.elements.emplace_back(std::move(decl));
    }

    void attribute(PlantUmlDocument& doc, ClassDecl& decl, std::string text) {
        if (text.find('(') != std::string::npos) {
            skip(doc, text, "method");
            return;
        }
        if (is_separator(text)) {
            skip(doc, text, "separator");
            return;
        }
        AttributeDecl attr;
        attr.line = line_no();
        static const std::regex id_marker(R"(\s*(\{id\}|<<id>>|\{PK\}|<<PK>>)\s*$)", std::regex::icase);
        std::smatch idm;
        if (std::regex_search(text, idm, id_marker)) {
            attr.is_id = true;
            text = trim(text.substr(0, static_cast<std::size_t>(idm.position(0))));
        }
        static const std::regex modifiers(R"(\{(static|abstract|field|classifier)\}\s*)", std::regex::icase);
        text = std::regex_replace(text, modifiers, "");
        if (!text.empty() && std::string_view("+-#~").find(text.front()) != std::string_view::npos) {
            text = trim(text.substr(1));
        }
        if (const auto colon = text.find(':'); colon != std::string::npos) {
            attr.name = unquote(text.substr(0, colon));
            std::string type = trim(text.substr(colon + 1));
            // keep the first token of the type; `String [0..1]` -> `String`
            attr.type = type.substr(0, type.find_first_of(" \t["));
        } else {
            std::istringstream words(text);
            std::vector<std::string> tokens;
            for (std::string w; words >> w;) tokens.push_back(w);
            if (tokens.size() == 2) {
                attr.type = tokens[0];
                attr.name = tokens[1];
            } else if (tokens.size() == 1) {
                attr.name = tokens[0];
            } else {
                skip(doc, text, "unrecognized class member");
                return;
            }
        }
        if (attr.name.empty()) {
            skip(doc, text, "attribute without a name");
            return;
        }
        decl.attributes.push_back(std::move(attr));
    }

    void enum_decl(PlantUmlDocument& doc, const std::smatch& m) {
        EnumDecl decl;
        decl.name = unquote(m[1].str());
        decl.line = line_no();
        auto add_literals = [&](const std::string& text) {
            std::istringstream in(text);
            for (std::string lit; std::getline(in, lit, ',');) {
                lit = trim(lit);
                if (!lit.empty()) decl.literals.push_back(lit);
            }
        };
        if (m[2].matched) {
            std::string body = m[2].str().substr(1);
            const auto close = body.find('}');
            add_literals(body.substr(0, close));
            if (close == std::string::npos) {
                while (++i_ < lines_.size()) {
                    std::string line = trim(lines_[i_]);
                    if (line == "}") break;
                    if (line.empty()) continue;
                    if (line.find('(') != std::string::npos || is_separator(line)) {
                        skip(doc, line, "unsupported enum member");
                        continue;
                    }
                    if (line.back() == '}') {
                        add_literals(line.substr(0, line.size() - 1));
                        break;
                    }
                    add_literals(line);
                }
            }
        }
        doc.elements.emplace_back(std::move(decl));
    }

    void relation(PlantUmlDocument& doc, const std::smatch& m, const std::string& line) {
        const std::string left_head = m[3].str();
        const std::string body = m[4].str();
        const std::string right_head = m[5].str();
        if (body.front() == '.') {
            skip(doc, line, "dependency or realization");
            return;
        }
        RelationDecl rel;
        rel.left = unquote(m[1].str());
        rel.right = unquote(m[7].str());
        rel.left_label = m[2].matched ? unquote(m[2].str()) : "";
        rel.right_label = m[6].matched ? unquote(m[6].str()) : "";
        rel.name = m[8].matched ? trim(m[8].str()) : "";
        rel.line = line_no();
        const bool left_gen = left_head == "<|";
        const bool right_gen = right_head == "|>";
        if (left_gen && right_gen) {
            skip(doc, line, "ambiguous generalization");
            return;
        }
        if (left_gen || right_gen) {
            rel.kind = RelationDecl::Kind::Generalization;
            // normalize so that `left` is the general class
            if (right_gen) std::swap(rel.left, rel.right);
        } else {
            rel.left_arrow = left_head == "<";
            rel.right_arrow = right_head == ">";
            rel.aggregation = (!left_head.empty() && !rel.left_arrow) || (!right_head.empty() && !rel.right_arrow);
        }
        doc.elements.emplace_back(std::move(rel));
    }

    std::vector<std::string> lines_;
    std::size_t first_line_;
    std::size_t i_ = 0;
};

struct BlockSpan {
    std::size_t begin;  // index of @startuml line
    std::size_t end;    // index of @enduml line
};

std::vector<BlockSpan> block_spans(const std::vector<std::string>& lines) {
    std::vector<BlockSpan> spans;
    constexpr auto kNone = static_cast<std::size_t>(-1);
    std::size_t open = kNone;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = trim(lines[i]);
        if (line.rfind("@startuml", 0) == 0) {
            open = i;
        } else if (line.rfind("@enduml", 0) == 0 && open != kNone) {
            spans.push_back({open, i});
            open = kNone;
        }
    }
    return spans;
}

}  // namespace

std::vector<std::string> find_blocks(std::string_view text) {
    const auto lines = split_lines(text);
    std::vector<std::string> blocks;
    for (const auto& span : block_spans(lines)) {
        std::string block;
        for (std::size_t i = span.begin; i <= span.end; ++i) block += lines[i] + "\n";
        blocks.push_back(std::move(block));
    }
    return blocks;
}

PlantUmlDocument read_document(std::string_view text) {
    const auto lines = split_lines(text);
    const auto spans = block_spans(lines);
    if (spans.empty()) {
        throw Error(ErrorCode::MissingMarkers, "no complete @startuml ... @enduml block found");
    }
    if (spans.size() > 1) {
        throw Error(ErrorCode::MultipleBlocks,
                    "expected exactly one @startuml block, found " + std::to_string(spans.size()));
    }
    const auto span = spans.front();
    PlantUmlDocument doc;
    doc.title = trim(trim(lines[span.begin]).substr(std::string_view("@startuml").size()));
    for (std::size_t i = span.begin; i <= span.end; ++i) doc.raw += lines[i] + "\n";
    std::vector<std::string> body(lines.begin() + static_cast<std::ptrdiff_t>(span.begin) + 1,
                                  lines.begin() + static_cast<std::ptrdiff_t>(span.end));
    Reader(std::move(body), span.begin + 2).run(doc);
    return doc;
}

}  // namespace lcpbridge::plantuml
