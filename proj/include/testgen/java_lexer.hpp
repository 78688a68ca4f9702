#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "testgen/error.hpp"

namespace testgen::java {

class LexError : public Error {
public:
    LexError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

// Comments are consumed by the lexer and never appear in the token stream.
struct Token {
    enum class Kind { Identifier, Number, String, CharLit, Punct };
    Kind kind;
    std::string text;    // literal source text, quotes included for literals
    std::size_t begin = 0;
    std::size_t end = 0; // one past the last byte
    std::size_t line = 1;

    bool is(std::string_view s) const { return text == s; }
};

std::vector<Token> lex(std::string_view source);

bool is_keyword(std::string_view word);
bool is_modifier(std::string_view word);

// Joins token texts back into display form: single spaces except around
// punctuation that binds tightly ("List<String>", "Object... values").
std::string join_tokens(const std::vector<std::string>& texts);

} // namespace testgen::java
