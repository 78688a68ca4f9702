#include "testgen/java_lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace testgen::java {

namespace {

bool is_ident_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

const std::unordered_set<std::string_view>& keyword_set() {
    static const std::unordered_set<std::string_view> kw = {
        "abstract", "assert",   "boolean",  "break",      "byte",    "case",
        "catch",    "char",     "class",    "const",      "continue", "default",
        "do",       "double",   "else",     "enum",       "extends", "final",
        "finally",  "float",    "for",      "goto",       "if",      "implements",
        "import",   "instanceof", "int",    "interface",  "long",    "native",
        "new",      "package",  "private",  "protected",  "public",  "return",
        "short",    "static",   "strictfp", "super",      "switch",  "synchronized",
        "this",     "throw",    "throws",   "transient",  "try",     "void",
        "volatile", "while",
    };
    return kw;
}

} // namespace

bool is_keyword(std::string_view word) { return keyword_set().count(word) > 0; }

bool is_modifier(std::string_view word) {
    static const std::unordered_set<std::string_view> mods = {
        "public", "protected", "private", "static",   "final",    "abstract",
        "native", "strictfp",  "transient", "volatile", "default", "sealed",
    };
    return mods.count(word) > 0;
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    const std::size_t n = src.size();

    auto push = [&](Token::Kind kind, std::size_t begin, std::size_t end) {
        out.push_back(Token{kind, std::string(src.substr(begin, end - begin)), begin, end, line});
    };

    while (i < n) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        // line comment
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        // block comment
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            std::size_t start_line = line;
            i += 2;
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) {
                if (src[i] == '\n') ++line;
                ++i;
            }
            if (i + 1 >= n) throw LexError("unterminated block comment", start_line);
            i += 2;
            continue;
        }
        // text block or string
        if (c == '"') {
            std::size_t begin = i;
            if (i + 2 < n && src[i + 1] == '"' && src[i + 2] == '"') {
                std::size_t start_line = line;
                i += 3;
                while (i + 2 < n && !(src[i] == '"' && src[i + 1] == '"' && src[i + 2] == '"')) {
                    if (src[i] == '\n') ++line;
                    if (src[i] == '\\') ++i;
                    ++i;
                }
                if (i + 2 >= n) throw LexError("unterminated text block", start_line);
                i += 3;
                push(Token::Kind::String, begin, i);
                continue;
            }
            std::size_t start_line = line;
            ++i;
            while (i < n && src[i] != '"') {
                if (src[i] == '\n') throw LexError("unterminated string literal", start_line);
                if (src[i] == '\\') ++i;
                ++i;
            }
            if (i >= n) throw LexError("unterminated string literal", start_line);
            ++i;
            push(Token::Kind::String, begin, i);
            continue;
        }
        if (c == '\'') {
            std::size_t begin = i;
            std::size_t start_line = line;
            ++i;
            while (i < n && src[i] != '\'') {
                if (src[i] == '\n') throw LexError("unterminated char literal", start_line);
                if (src[i] == '\\') ++i;
                ++i;
            }
            if (i >= n) throw LexError("unterminated char literal", start_line);
            ++i;
            push(Token::Kind::CharLit, begin, i);
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t begin = i;
            while (i < n && is_ident_part(static_cast<unsigned char>(src[i]))) ++i;
            push(Token::Kind::Identifier, begin, i);
            continue;
        }
        if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t begin = i;
            bool hex = c == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X');
            while (i < n) {
                unsigned char d = static_cast<unsigned char>(src[i]);
                if (std::isalnum(d) || d == '_' || d == '.') {
                    // don't swallow "1..3" or a trailing "1.foo()" chain
                    if (d == '.' && (i + 1 >= n || !std::isdigit(static_cast<unsigned char>(src[i + 1])))) break;
                    ++i;
                    continue;
                }
                // exponent sign: 1e-3, 0x1p+2
                if ((d == '+' || d == '-') && i > begin) {
                    char prev = static_cast<char>(std::tolower(src[i - 1]));
                    if ((!hex && prev == 'e') || (hex && prev == 'p')) {
                        ++i;
                        continue;
                    }
                }
                break;
            }
            push(Token::Kind::Number, begin, i);
            continue;
        }
        // varargs ellipsis as a single token
        if (c == '.' && i + 2 < n && src[i + 1] == '.' && src[i + 2] == '.') {
            push(Token::Kind::Punct, i, i + 3);
            i += 3;
            continue;
        }
        push(Token::Kind::Punct, i, i + 1);
        ++i;
    }
    return out;
}

std::string join_tokens(const std::vector<std::string>& texts) {
    std::string out;
    std::string prev;
    for (const std::string& t : texts) {
        if (!out.empty()) {
            static const std::string no_space_before = ")],>;.";
            char last = prev.empty() ? ' ' : prev.back();
            bool tight = false;
            if (t.size() == 1 && no_space_before.find(t[0]) != std::string::npos) tight = true;
            if (t == "...") tight = true;
            if (t == "(" && (std::isalnum(static_cast<unsigned char>(last)) || last == '_' || last == '>' ||
                             last == ']'))
                tight = true; // call/decl parens bind to the name
            if (t == "<" && (std::isalnum(static_cast<unsigned char>(last)) || last == '_')) tight = true;
            if (t == "[") tight = true;
            if (prev == "(" || prev == "<" || prev == "[" || prev == "." || prev == "@") tight = true;
            if (t == ">" && last == '>') tight = true;
            if (prev == "...") tight = t == ")" || t == ","; // space before the vararg name
            if (!tight) out += ' ';
        }
        out += t;
        prev = t;
    }
    return out;
}

} // namespace testgen::java
