#include "lcpbridge/pivot/dsl.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "lcpbridge/pivot/validate.hpp"

namespace lcpbridge::pivot {

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ", ";
        out += item;
    }
    return out;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found)
    : Error(ErrorCode::SyntaxError,
            std::to_string(line) + ":" + std::to_string(column) + ": expected " + join(expected) + ", found " + found),
      line_(line), column_(column), expected_(std::move(expected)) {}

namespace {

enum class Tok { Ident, Int, LBrace, RBrace, Colon, LBracket, RBracket, Comma, DotDot, Star, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "identifier '" + t.text + "'";
        case Tok::Int: return "integer '" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_blank();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", line_, col_});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < src_.size()) {
            const char ch = src_[pos_];
            if (ch == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                advance();
            } else {
                break;
            }
        }
    }

    Token next() {
        const std::size_t line = line_;
        const std::size_t col = col_;
        const char ch = src_[pos_];
        auto single = [&](Tok kind) {
            advance();
            return Token{kind, std::string(1, ch), line, col};
        };
        switch (ch) {
            case '{': return single(Tok::LBrace);
            case '}': return single(Tok::RBrace);
            case ':': return single(Tok::Colon);
            case '[': return single(Tok::LBracket);
            case ']': return single(Tok::RBracket);
            case ',': return single(Tok::Comma);
            case '*': return single(Tok::Star);
            case '.':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '.') {
                    advance();
                    advance();
                    return {Tok::DotDot, "..", line, col};
                }
                break;
            default: break;
        }
        const auto uch = static_cast<unsigned char>(ch);
        if (std::isalpha(uch) || ch == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                advance();
            }
            return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), line, col};
        }
        if (std::isdigit(uch)) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
            return {Tok::Int, std::string(src_.substr(start, pos_ - start)), line, col};
        }
        throw SyntaxError(line, col, {"declaration or symbol"}, "unexpected character '" + std::string(1, ch) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    DomainModel run() {
        keyword("model");
        model_.name = ident("model name");
        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (t.kind == Tok::Ident && t.text == "enum") {
                enum_decl();
            } else if (t.kind == Tok::Ident && t.text == "class") {
                class_decl();
            } else if (t.kind == Tok::Ident && t.text == "association") {
                assoc_decl();
            } else {
                fail({"'enum'", "'class'", "'association'", "end of input"});
            }
        }
        return std::move(model_);
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        throw SyntaxError(t.line, t.column, std::move(expected), describe(t));
    }

    const Token& expect(Tok kind, const char* label) {
        if (peek().kind != kind) fail({label});
        return take();
    }

    void keyword(const char* word) {
        if (peek().kind != Tok::Ident || peek().text != word) fail({std::string("'") + word + "'"});
        take();
    }

    std::string ident(const char* label) { return expect(Tok::Ident, label).text; }

    /// Optional trailing flag (`id`, `nav`) only binds on the same line.
    bool flag(const char* word, std::size_t line) {
        const Token& t = peek();
        if (t.kind == Tok::Ident && t.text == word && t.line == line) {
            take();
            return true;
        }
        return false;
    }

    std::uint32_t integer() {
        const Token& t = expect(Tok::Int, "integer");
        std::uint32_t value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc{}) {
            throw SyntaxError(t.line, t.column, {"integer below 2^32"}, describe(t));
        }
        return value;
    }

    void enum_decl() {
        take();
        Enumeration e;
        e.name = ident("enumeration name");
        expect(Tok::LBrace, "'{'");
        e.literals.push_back(ident("literal"));
        while (peek().kind == Tok::Comma) {
            take();
            e.literals.push_back(ident("literal"));
        }
        if (peek().kind != Tok::RBrace) fail({"','", "'}'"});
        take();
        model_.enumerations.push_back(std::move(e));
    }

    void class_decl() {
        take();
        Class c;
        c.name = ident("class name");
        if (peek().kind == Tok::Ident && peek().text == "extends") {
            take();
            model_.generalizations.push_back({ident("general class name"), c.name});
        }
        expect(Tok::LBrace, "'{'");
        while (peek().kind != Tok::RBrace) {
            if (peek().kind != Tok::Ident) fail({"property name", "'}'"});
            Property p;
            p.name = take().text;
            expect(Tok::Colon, "':'");
            const Token& type = expect(Tok::Ident, "type name");
            if (auto prim = primitive_from_string(type.text)) {
                p.type = *prim;
            } else {
                p.type = EnumRef{type.text};
            }
            p.is_id = flag("id", type.line);
            c.properties.push_back(std::move(p));
        }
        take();
        model_.classes.push_back(std::move(c));
    }

    AssociationEnd assoc_end() {
        AssociationEnd e;
        e.role = ident("role name");
        expect(Tok::Colon, "':'");
        e.class_name = ident("class name");
        expect(Tok::LBracket, "'['");
        e.multiplicity.lower = integer();
        expect(Tok::DotDot, "'..'");
        if (peek().kind == Tok::Star) {
            take();
            e.multiplicity.upper.reset();
        } else if (peek().kind == Tok::Int) {
            e.multiplicity.upper = integer();
        } else {
            fail({"integer", "'*'"});
        }
        const std::size_t line = expect(Tok::RBracket, "']'").line;
        e.navigable = flag("nav", line);
        return e;
    }

    void assoc_decl() {
        take();
        Association a;
        a.name = ident("association name");
        expect(Tok::LBrace, "'{'");
        a.end1 = assoc_end();
        a.end2 = assoc_end();
        expect(Tok::RBrace, "'}'");
        model_.associations.push_back(std::move(a));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    DomainModel model_;
};

void print_end(std::ostream& out, const AssociationEnd& e) {
    out << "  " << e.role << " : " << e.class_name << " [" << to_string(e.multiplicity) << "]";
    if (e.navigable) out << " nav";
    out << '\n';
}

}  // namespace

DomainModel parse_pivot_text(std::string_view source) {
    DomainModel model = Parser(Lexer(source).run()).run();
    require_valid(model);
    return model;
}

std::string print_pivot_text(const DomainModel& model) {
    require_valid(model);
    std::ostringstream out;
    out << "model " << model.name << '\n';
    for (const auto& e : model.enumerations) {
        out << "\nenum " << e.name << " { ";
        for (std::size_t i = 0; i < e.literals.size(); ++i) {
            out << (i ? ", " : "") << e.literals[i];
        }
        out << " }\n";
    }
    for (const auto& c : model.classes) {
        out << "\nclass " << c.name;
        if (auto general = model.general_of(c.name)) out << " extends " << *general;
        out << " {\n";
        for (const auto& p : c.properties) {
            out << "  " << p.name << " : " << type_name(p.type);
            if (p.is_id) out << " id";
            out << '\n';
        }
        out << "}\n";
    }
    for (const auto& a : model.associations) {
        out << "\nassociation " << a.name << " {\n";
        print_end(out, a.end1);
        print_end(out, a.end2);
        out << "}\n";
    }
    return out.str();
}

}  // namespace lcpbridge::pivot
