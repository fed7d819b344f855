#include "java_lexer.hpp"

#include <array>
#include <cctype>
#include <cstring>

namespace jeedep::java {

namespace {

void append_utf8(std::string& out, unsigned long cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

// Longest match first.
constexpr std::array<std::string_view, 24> kOperators = {
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "<<", "@",  "?",  ":",
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            Token t;
            t.pos = {line_, col_};
            t.offset = i_;
            if (i_ >= src_.size()) {
                t.kind = Token::Kind::End;
                out.push_back(t);
                return out;
            }
            unsigned char c = static_cast<unsigned char>(src_[i_]);
            if (ident_start(c)) {
                std::size_t start = i_;
                while (i_ < src_.size() && ident_part(static_cast<unsigned char>(src_[i_]))) advance();
                t.kind = Token::Kind::Identifier;
                t.text = std::string(src_.substr(start, i_ - start));
            } else if (std::isdigit(c) || (c == '.' && i_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
                lex_number(t);
            } else if (c == '"') {
                lex_string(t);
            } else if (c == '\'') {
                lex_char(t);
            } else {
                lex_punct(t);
            }
            t.length = i_ - t.offset;
            out.push_back(std::move(t));
        }
    }

private:
    void advance()
    {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, {line_, col_}); }

    void skip_space_and_comments()
    {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
                advance();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '*') {
                Position start{line_, col_};
                advance();
                advance();
                while (i_ + 1 < src_.size() && !(src_[i_] == '*' && src_[i_ + 1] == '/')) advance();
                if (i_ + 1 >= src_.size()) throw SyntaxError("unterminated comment", start);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    void lex_number(Token& t)
    {
        std::size_t start = i_;
        if (src_[i_] == '0' && i_ + 1 < src_.size() && (src_[i_ + 1] == 'x' || src_[i_ + 1] == 'X')) {
            advance();
            advance();
            while (i_ < src_.size() && (std::isxdigit(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
                advance();
        } else {
            while (i_ < src_.size()) {
                char c = src_[i_];
                if (std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                    advance();
                } else if ((c == 'e' || c == 'E') && i_ + 1 < src_.size()) {
                    advance();
                    if (src_[i_] == '+' || src_[i_] == '-') advance();
                } else {
                    break;
                }
            }
        }
        while (i_ < src_.size() && std::strchr("lLfFdD", src_[i_]) && src_[i_] != '\0') advance();
        t.kind = Token::Kind::Number;
        t.text = std::string(src_.substr(start, i_ - start));
    }

    void lex_string(Token& t)
    {
        Position start{line_, col_};
        t.kind = Token::Kind::String;
        if (src_.substr(i_, 3) == "\"\"\"") {
            // text block
            for (int k = 0; k < 3; ++k) advance();
            while (i_ < src_.size() && src_[i_] != '\n') advance();
            if (i_ < src_.size()) advance();
            std::size_t body = i_;
            while (i_ + 2 < src_.size() && src_.substr(i_, 3) != "\"\"\"") {
                if (src_[i_] == '\\') advance();
                advance();
            }
            if (i_ + 2 >= src_.size()) throw SyntaxError("unterminated text block", start);
            t.text = decode_escapes(src_.substr(body, i_ - body));
            for (int k = 0; k < 3; ++k) advance();
            return;
        }
        advance();
        std::size_t body = i_;
        while (i_ < src_.size() && src_[i_] != '"') {
            if (src_[i_] == '\n') throw SyntaxError("unterminated string literal", start);
            if (src_[i_] == '\\' && i_ + 1 < src_.size()) advance();
            advance();
        }
        if (i_ >= src_.size()) throw SyntaxError("unterminated string literal", start);
        t.text = decode_escapes(src_.substr(body, i_ - body));
        advance();
    }

    void lex_char(Token& t)
    {
        Position start{line_, col_};
        advance();
        std::size_t body = i_;
        while (i_ < src_.size() && src_[i_] != '\'') {
            if (src_[i_] == '\n') throw SyntaxError("unterminated character literal", start);
            if (src_[i_] == '\\' && i_ + 1 < src_.size()) advance();
            advance();
        }
        if (i_ >= src_.size()) throw SyntaxError("unterminated character literal", start);
        t.kind = Token::Kind::Char;
        t.text = decode_escapes(src_.substr(body, i_ - body));
        advance();
    }

    void lex_punct(Token& t)
    {
        t.kind = Token::Kind::Punct;
        if (src_[i_] == '>') {
            if (i_ + 1 < src_.size() && src_[i_ + 1] == '=') {
                t.text = ">=";
                advance();
                advance();
            } else {
                t.text = ">";
                advance();
            }
            return;
        }
        for (auto op : kOperators) {
            if (src_.substr(i_, op.size()) == op) {
                t.text = std::string(op);
                for (std::size_t k = 0; k < op.size(); ++k) advance();
                return;
            }
        }
        t.text = std::string(1, src_[i_]);
        advance();
    }

    std::string_view src_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace

std::string decode_escapes(std::string_view body)
{
    std::string out;
    out.reserve(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c != '\\' || i + 1 >= body.size()) {
            out += c;
            continue;
        }
        char e = body[++i];
        switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 's': out += ' '; break;
        case '0': case '1': case '2': case '3': case '4': case '5': case '6': case '7': {
            int value = e - '0';
            for (int k = 0; k < 2 && i + 1 < body.size() && body[i + 1] >= '0' && body[i + 1] <= '7'; ++k)
                value = value * 8 + (body[++i] - '0');
            append_utf8(out, static_cast<unsigned long>(value));
            break;
        }
        case 'u': {
            while (i + 1 < body.size() && body[i + 1] == 'u') ++i;
            if (i + 4 < body.size()) {
                std::string hex(body.substr(i + 1, 4));
                bool ok = hex.size() == 4;
                for (char h : hex) ok = ok && std::isxdigit(static_cast<unsigned char>(h));
                if (ok) {
                    append_utf8(out, std::stoul(hex, nullptr, 16));
                    i += 4;
                    break;
                }
            }
            out += "\\u";
            break;
        }
        case '\n':
            break;  // line continuation in text blocks
        default: out += e;
        }
    }
    return out;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

} // namespace jeedep::java
