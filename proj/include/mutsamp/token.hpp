#pragma once

// Lossless tokenizer for Java-style (C-family) source. The token stream
// concatenates back to the input byte-for-byte; operators inside string
// literals, char literals, and comments are never emitted as operator tokens.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mutsamp {

enum class TokenKind {
    identifier,
    keyword,
    number_literal,
    string_literal,
    char_literal,
    operator_symbol,
    punctuation,
    comment,
    whitespace,
};

struct Token {
    TokenKind kind;
    std::string text;         // exact source substring
    int line = 1;             // 1-based
    int column = 1;           // 1-based, in bytes
    std::size_t byte_offset = 0;
};

class TokenizeError : public std::runtime_error {
  public:
    TokenizeError(std::string message, int line)
        : std::runtime_error(std::move(message)), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

namespace detail {

inline bool is_space_char(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

inline bool is_digit_char(char c) { return c >= '0' && c <= '9'; }

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

inline bool is_ident_part(unsigned char c) {
    return is_ident_start(c) || is_digit_char(static_cast<char>(c));
}

inline bool is_java_keyword(std::string_view s) {
    static const char* const kKeywords[] = {
        "abstract", "assert",   "boolean",   "break",      "byte",    "case",
        "catch",    "char",     "class",     "const",      "continue","default",
        "do",       "double",   "else",      "enum",       "extends", "final",
        "finally",  "float",    "for",       "goto",       "if",      "implements",
        "import",   "instanceof","int",      "interface",  "long",    "native",
        "new",      "package",  "private",   "protected",  "public",  "return",
        "short",    "static",   "strictfp",  "super",      "switch",  "synchronized",
        "this",     "throw",    "throws",    "transient",  "try",     "void",
        "volatile", "while",    "true",      "false",      "null",
    };
    for (const char* k : kKeywords)
        if (s == k) return true;
    return false;
}

// Strict UTF-8 validation (rejects overlong encodings, surrogates, > U+10FFFF).
// Returns the 1-based line of the first invalid byte, or 0 if valid.
inline int invalid_utf8_line(std::string_view bytes) {
    int line = 1;
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        if (c == '\n') ++line;
        if (c < 0x80) {
            ++i;
            continue;
        }
        int len;
        std::uint32_t cp;
        if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1Fu; }
        else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0Fu; }
        else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07u; }
        else return line;
        if (i + static_cast<std::size_t>(len) > n) return line;
        for (int k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
            if ((cc & 0xC0) != 0x80) return line;
            cp = (cp << 6) | (cc & 0x3Fu);
        }
        if (len == 2 && cp < 0x80) return line;
        if (len == 3 && (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF))) return line;
        if (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) return line;
        i += static_cast<std::size_t>(len);
    }
    return 0;
}

// Multi-character operators, longest first for maximal munch. '/' compounds
// are handled in the comment branch of the main loop.
inline std::string_view match_operator(std::string_view rest) {
    static const std::string_view kOps[] = {
        ">>>=", ">>>", ">>=", "<<=", "->", "::",
        ">>", "<<", ">=", "<=", "==", "!=", "&&", "||", "++", "--",
        "+=", "-=", "*=", "%=", "&=", "|=", "^=",
        "+", "-", "*", "%", "&", "|", "^", "!", "=", "<", ">", "?", ":", "~",
    };
    for (std::string_view op : kOps)
        if (rest.substr(0, op.size()) == op) return op;
    return {};
}

} // namespace detail

// Splits `source` into a lossless token stream. Throws TokenizeError on
// non-UTF-8 input and on unterminated string/char literals or block comments.
inline std::vector<Token> tokenize(std::string_view source) {
    if (int bad_line = detail::invalid_utf8_line(source))
        throw TokenizeError("invalid UTF-8 byte sequence", bad_line);

    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = source.size();
    int line = 1;
    int column = 1;

    auto emit = [&](TokenKind kind, std::size_t begin, std::size_t end) {
        Token t;
        t.kind = kind;
        t.text.assign(source.substr(begin, end - begin));
        t.line = line;
        t.column = column;
        t.byte_offset = begin;
        for (std::size_t k = begin; k < end; ++k) {
            if (source[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        tokens.push_back(std::move(t));
    };

    while (i < n) {
        const char c = source[i];

        if (detail::is_space_char(c)) {
            std::size_t j = i;
            while (j < n && detail::is_space_char(source[j])) ++j;
            emit(TokenKind::whitespace, i, j);
            i = j;
            continue;
        }

        if (c == '/') {
            if (i + 1 < n && source[i + 1] == '/') {
                std::size_t j = i + 2;
                while (j < n && source[j] != '\n') ++j;
                emit(TokenKind::comment, i, j);
                i = j;
                continue;
            }
            if (i + 1 < n && source[i + 1] == '*') {
                std::size_t j = i + 2;
                while (j + 1 < n && !(source[j] == '*' && source[j + 1] == '/')) ++j;
                if (j + 1 >= n) throw TokenizeError("unterminated block comment", line);
                emit(TokenKind::comment, i, j + 2);
                i = j + 2;
                continue;
            }
            if (i + 1 < n && source[i + 1] == '=') {
                emit(TokenKind::operator_symbol, i, i + 2);
                i += 2;
                continue;
            }
            emit(TokenKind::operator_symbol, i, i + 1);
            ++i;
            continue;
        }

        if (c == '"' || c == '\'') {
            const char quote = c;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < n) {
                if (source[j] == '\\' && j + 1 < n) {
                    j += 2;
                    continue;
                }
                if (source[j] == quote) {
                    closed = true;
                    ++j;
                    break;
                }
                if (source[j] == '\n') break;
                ++j;
            }
            if (!closed)
                throw TokenizeError(quote == '"' ? "unterminated string literal"
                                                 : "unterminated char literal",
                                    line);
            emit(quote == '"' ? TokenKind::string_literal : TokenKind::char_literal, i, j);
            i = j;
            continue;
        }

        if (detail::is_digit_char(c) ||
            (c == '.' && i + 1 < n && detail::is_digit_char(source[i + 1]))) {
            std::size_t j = i + 1;
            while (j < n) {
                const char d = source[j];
                const char prev = source[j - 1];
                if (detail::is_ident_part(static_cast<unsigned char>(d)) || d == '.') {
                    ++j;
                } else if ((d == '+' || d == '-') &&
                           (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P')) {
                    // exponent sign belongs to the literal: 1e+5, 0x1p-3
                    ++j;
                } else {
                    break;
                }
            }
            emit(TokenKind::number_literal, i, j);
            i = j;
            continue;
        }

        if (detail::is_ident_start(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < n && detail::is_ident_part(static_cast<unsigned char>(source[j]))) ++j;
            std::string_view word = source.substr(i, j - i);
            emit(detail::is_java_keyword(word) ? TokenKind::keyword : TokenKind::identifier, i, j);
            i = j;
            continue;
        }

        if (std::string_view op = detail::match_operator(source.substr(i)); !op.empty()) {
            emit(TokenKind::operator_symbol, i, i + op.size());
            i += op.size();
            continue;
        }

        if (c == '.' && i + 2 < n && source[i + 1] == '.' && source[i + 2] == '.') {
            emit(TokenKind::punctuation, i, i + 3);
            i += 3;
            continue;
        }

        // ( ) [ ] { } ; , . @ and any leftover ASCII byte: single punctuation
        // token so the stream stays lossless.
        emit(TokenKind::punctuation, i, i + 1);
        ++i;
    }

    return tokens;
}

} // namespace mutsamp
