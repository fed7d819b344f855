#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jeedep/java_ast.hpp"

namespace jeedep::java {

struct Token {
    enum class Kind { Identifier, String, Char, Number, Punct, End };

    Kind kind = Kind::End;
    std::string text;  // identifier / punctuation / decoded literal
    Position pos;
    std::size_t offset = 0;
    std::size_t length = 0;

    bool is(std::string_view p) const { return (kind == Kind::Punct || kind == Kind::Identifier) && text == p; }
    bool ident() const { return kind == Kind::Identifier; }
};

// Tokenizes Java source. Comments are dropped; '>' is always a single token
// so that generic argument lists can be closed one bracket at a time.
std::vector<Token> tokenize(std::string_view source);

// Decodes Java escape sequences (including \uXXXX) into UTF-8.
std::string decode_escapes(std::string_view body);

} // namespace jeedep::java
