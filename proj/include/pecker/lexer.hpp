#pragma once

#include "pecker/diag.hpp"

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pecker {

enum class TokenKind {
    Identifier,
    Keyword,
    Number,
    Punct,
    Eof,
};

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string text;        // lexeme exactly as written
    SourcePos pos;
    // Number payload. Width is the declared size for sized literals, 32 otherwise.
    std::uint64_t value = 0;
    int width = 0;
    bool sized = false;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline const char* const kKeywords[] = {
    "module", "endmodule", "input", "output", "inout", "wire", "reg",
    "assign", "always", "posedge", "negedge", "begin", "end",
    "if", "else", "case", "endcase", "default",
};

inline bool is_keyword(std::string_view s) {
    for (const char* k : kKeywords)
        if (s == k) return true;
    return false;
}

inline int digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace detail

class Lexer {
public:
    Lexer(std::string_view src, std::string file) : src_(src), pos_{std::move(file), 1, 1, 0} {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            if (at_end()) {
                out.push_back(Token{TokenKind::Eof, "", pos_, 0, 0, false});
                return out;
            }
            out.push_back(next_token());
        }
    }

private:
    bool at_end() const { return pos_.offset >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_.offset + ahead < src_.size() ? src_[pos_.offset + ahead] : '\0';
    }
    char advance() {
        char c = src_[pos_.offset++];
        if (c == '\n') { pos_.line++; pos_.col = 1; } else { pos_.col++; }
        return c;
    }

    void skip_space_and_comments() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                SourcePos start = pos_;
                advance(); advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (at_end()) throw Error(ErrorKind::Lex, start, "unterminated block comment");
                    advance();
                }
                advance(); advance();
            } else {
                return;
            }
        }
    }

    Token next_token() {
        SourcePos start = pos_;
        char c = peek();
        if (detail::is_ident_start(c)) return lex_ident(start);
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') return lex_number(start);
        return lex_punct(start);
    }

    Token lex_ident(SourcePos start) {
        std::string text;
        while (detail::is_ident_char(peek())) text += advance();
        TokenKind kind = detail::is_keyword(text) ? TokenKind::Keyword : TokenKind::Identifier;
        return Token{kind, std::move(text), start, 0, 0, false};
    }

    // Sized (<size>'<base><digits>) and unsized decimal literals. Underscores allowed
    // between digits, as in 8'b1010_1010.
    Token lex_number(SourcePos start) {
        std::string text;
        std::uint64_t size_val = 0;
        bool have_size = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            char c = advance();
            text += c;
            size_val = size_val * 10 + static_cast<std::uint64_t>(c - '0');
            have_size = true;
        }
        if (peek() != '\'') {
            if (!have_size) throw Error(ErrorKind::Lex, start, "malformed number");
            if (size_val > 0xFFFFFFFFull)
                throw Error(ErrorKind::Lex, start, "unsized literal does not fit in 32 bits");
            return Token{TokenKind::Number, std::move(text), start, size_val, 32, false};
        }

        text += advance(); // '
        int base = 0;
        char basec = peek();
        switch (basec) {
        case 'b': case 'B': base = 2; break;
        case 'o': case 'O': base = 8; break;
        case 'd': case 'D': base = 10; break;
        case 'h': case 'H': base = 16; break;
        default:
            throw Error(ErrorKind::Lex, start, std::string("unknown number base '") + basec + "'");
        }
        text += advance();

        if (!have_size)
            throw Error(ErrorKind::Lex, start, "literal is missing its size");
        if (size_val < 1 || size_val > 64)
            throw Error(ErrorKind::Lex, start, "literal width must be in 1..64");
        int width = static_cast<int>(size_val);

        std::uint64_t value = 0;
        bool any_digit = false;
        for (;;) {
            char d = peek();
            if (d == '_') { text += advance(); continue; }
            int dv = detail::digit_value(d);
            if (dv < 0 || dv >= base) break;
            text += advance();
            any_digit = true;
            value = value * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(dv);
        }
        if (!any_digit) throw Error(ErrorKind::Lex, start, "literal has no digits");
        if (width < 64 && (value >> width) != 0)
            throw Error(ErrorKind::Lex, start, "literal value does not fit in its declared width");
        return Token{TokenKind::Number, std::move(text), start, value, width, true};
    }

    Token lex_punct(SourcePos start) {
        static const char* const two_char[] = {
            "<=", ">=", "==", "!=", "<<", ">>",
        };
        char c = peek();
        for (const char* op : two_char) {
            if (c == op[0] && peek(1) == op[1]) {
                std::string text;
                text += advance();
                text += advance();
                return Token{TokenKind::Punct, std::move(text), start, 0, 0, false};
            }
        }
        static const std::string_view singles = "()[]{}:;,.=<>&|^~+-*?@#";
        if (singles.find(c) == std::string_view::npos)
            throw Error(ErrorKind::Lex, start, std::string("stray character '") + c + "'");
        std::string text(1, advance());
        return Token{TokenKind::Punct, std::move(text), start, 0, 0, false};
    }

    std::string_view src_;
    SourcePos pos_;
};

/// Tokenize a design source. The token stream always ends with one Eof token.
inline std::vector<Token> tokenize(std::string_view source, const std::string& file) {
    return Lexer(source, file).run();
}

} // namespace pecker
