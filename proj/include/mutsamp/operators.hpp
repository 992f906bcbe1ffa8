#pragma once

// The nine mutation operators and the rules for locating their application
// points in a token stream. Each eligible operator occurrence yields exactly
// one mutation point with a fixed, deterministic replacement.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mutsamp/token.hpp"

namespace mutsamp {

enum class MutationOperator {
    aor_b, // binary arithmetic:      a + b   -> a - b
    aor_s, // shortcut arithmetic:    ++a     -> --a
    aor_u, // unary arithmetic:       -a      -> +a
    lor,   // logical (bitwise):      a & b   -> a | b
    sor,   // shift:                  a >> b  -> a << b
    ror,   // relational:             a >= b  -> a < b
    cor,   // binary conditional:     a && b  -> a || b
    cod,   // unary conditional:      !a      -> a
    saor,  // shortcut assignment:    a *= b  -> a /= b
};

inline constexpr std::array<MutationOperator, 9> kAllOperators = {
    MutationOperator::aor_b, MutationOperator::aor_s, MutationOperator::aor_u,
    MutationOperator::lor,   MutationOperator::sor,   MutationOperator::ror,
    MutationOperator::cor,   MutationOperator::cod,   MutationOperator::saor,
};

inline std::string_view operator_name(MutationOperator op) {
    switch (op) {
    case MutationOperator::aor_b: return "AOR-B";
    case MutationOperator::aor_s: return "AOR-S";
    case MutationOperator::aor_u: return "AOR-U";
    case MutationOperator::lor:   return "LOR";
    case MutationOperator::sor:   return "SOR";
    case MutationOperator::ror:   return "ROR";
    case MutationOperator::cor:   return "COR";
    case MutationOperator::cod:   return "COD";
    case MutationOperator::saor:  return "SAOR";
    }
    return "?";
}

inline std::optional<MutationOperator> operator_from_name(std::string_view name) {
    for (MutationOperator op : kAllOperators)
        if (operator_name(op) == name) return op;
    return std::nullopt;
}

// Fixed replacement for `text` under `op`; nullopt when the token is outside
// the operator's domain. COD maps "!" to the empty string (deletion).
inline std::optional<std::string_view> operator_replacement(MutationOperator op,
                                                            std::string_view text) {
    struct Entry {
        std::string_view from, to;
    };
    auto lookup = [&](std::initializer_list<Entry> table) -> std::optional<std::string_view> {
        for (const Entry& e : table)
            if (e.from == text) return e.to;
        return std::nullopt;
    };
    switch (op) {
    case MutationOperator::aor_b:
        return lookup({{"+", "-"}, {"-", "+"}, {"*", "/"}, {"/", "*"}, {"%", "*"}});
    case MutationOperator::aor_s:
        return lookup({{"++", "--"}, {"--", "++"}});
    case MutationOperator::aor_u:
        return lookup({{"-", "+"}, {"+", "-"}});
    case MutationOperator::lor:
        return lookup({{"&", "|"}, {"|", "&"}, {"^", "&"}});
    case MutationOperator::sor:
        return lookup({{">>", "<<"}, {"<<", ">>"}, {">>>", "<<"}});
    case MutationOperator::ror:
        return lookup({{">=", "<"}, {"<=", ">"}, {">", "<="}, {"<", ">="},
                       {"==", "!="}, {"!=", "=="}});
    case MutationOperator::cor:
        return lookup({{"&&", "||"}, {"||", "&&"}});
    case MutationOperator::cod:
        return lookup({{"!", ""}});
    case MutationOperator::saor:
        return lookup({{"*=", "/="}, {"/=", "*="}, {"+=", "-="}, {"-=", "+="}, {"%=", "*="}});
    }
    return std::nullopt;
}

struct MutationPoint {
    MutationOperator op;
    std::size_t token_index = 0;
    std::string replacement_text; // empty for COD deletion
    int line = 1;
};

namespace detail {

inline bool is_trivia(const Token& t) {
    return t.kind == TokenKind::whitespace || t.kind == TokenKind::comment;
}

// Index of the previous non-trivia token, or npos.
inline std::size_t prev_significant(const std::vector<Token>& tokens, std::size_t i) {
    while (i > 0) {
        --i;
        if (!is_trivia(tokens[i])) return i;
    }
    return static_cast<std::size_t>(-1);
}

// Unary context for '+'/'-': previous significant token is an operator
// symbol, an opening/separator punctuation, `return`/`case`, or there is
// no previous token at all.
inline bool is_unary_position(const std::vector<Token>& tokens, std::size_t i) {
    std::size_t p = prev_significant(tokens, i);
    if (p == static_cast<std::size_t>(-1)) return true;
    const Token& t = tokens[p];
    if (t.kind == TokenKind::operator_symbol) return true;
    if (t.kind == TokenKind::punctuation &&
        (t.text == "(" || t.text == "[" || t.text == "," || t.text == ";" || t.text == "{"))
        return true;
    if (t.kind == TokenKind::keyword && (t.text == "return" || t.text == "case")) return true;
    return false;
}

// Binary (value-on-the-left) context for LOR/SOR targets.
inline bool is_binary_position(const std::vector<Token>& tokens, std::size_t i) {
    std::size_t p = prev_significant(tokens, i);
    if (p == static_cast<std::size_t>(-1)) return false;
    const Token& t = tokens[p];
    switch (t.kind) {
    case TokenKind::identifier:
    case TokenKind::number_literal:
    case TokenKind::string_literal:
    case TokenKind::char_literal:
        return true;
    case TokenKind::punctuation:
        return t.text == ")" || t.text == "]";
    case TokenKind::keyword:
        return t.text == "this" || t.text == "super" || t.text == "true" ||
               t.text == "false" || t.text == "null";
    default:
        return false;
    }
}

inline bool all_of_char(std::string_view s, char c) {
    for (char x : s)
        if (x != c) return false;
    return !s.empty();
}

inline bool is_statement_boundary(const Token& t) {
    return t.kind == TokenKind::punctuation &&
           (t.text == ";" || t.text == "{" || t.text == "}");
}

// Type-argument heuristic for '>'-shaped tokens (">", ">>", ">>>"): the token
// directly follows an identifier or another '>' run, is directly followed by
// an identifier, '(' or '>' (no whitespace on either side), and an unmatched
// '<' exists earlier in the same statement.
inline bool looks_like_generic_close(const std::vector<Token>& tokens, std::size_t i) {
    if (i == 0 || i + 1 >= tokens.size()) return false;
    const Token& prev = tokens[i - 1];
    const Token& next = tokens[i + 1];
    const bool prev_ok = prev.kind == TokenKind::identifier ||
                         (prev.kind == TokenKind::operator_symbol && all_of_char(prev.text, '>'));
    const bool next_ok = next.kind == TokenKind::identifier ||
                         (next.kind == TokenKind::punctuation && next.text == "(") ||
                         (next.kind == TokenKind::operator_symbol && all_of_char(next.text, '>'));
    if (!prev_ok || !next_ok) return false;
    long balance = 0;
    for (std::size_t k = i; k-- > 0;) {
        const Token& t = tokens[k];
        if (is_statement_boundary(t)) break;
        if (t.kind != TokenKind::operator_symbol) continue;
        if (all_of_char(t.text, '<')) balance += static_cast<long>(t.text.size());
        else if (all_of_char(t.text, '>')) balance -= static_cast<long>(t.text.size());
    }
    return balance > 0;
}

// Mirror heuristic for '<': directly follows an identifier (no whitespace)
// and is balanced by a '>' before the end of the statement.
inline bool looks_like_generic_open(const std::vector<Token>& tokens, std::size_t i) {
    if (i == 0) return false;
    if (tokens[i - 1].kind != TokenKind::identifier) return false;
    long balance = static_cast<long>(tokens[i].text.size());
    for (std::size_t k = i + 1; k < tokens.size(); ++k) {
        const Token& t = tokens[k];
        if (is_statement_boundary(t)) break;
        if (t.kind != TokenKind::operator_symbol) continue;
        if (all_of_char(t.text, '<')) balance += static_cast<long>(t.text.size());
        else if (all_of_char(t.text, '>')) {
            balance -= static_cast<long>(t.text.size());
            if (balance <= 0) return true;
        }
    }
    return false;
}

inline std::optional<MutationOperator> classify(const std::vector<Token>& tokens,
                                                std::size_t i) {
    const std::string& s = tokens[i].text;
    if (s == "+" || s == "-")
        return is_unary_position(tokens, i) ? MutationOperator::aor_u : MutationOperator::aor_b;
    if (s == "*" || s == "/" || s == "%") return MutationOperator::aor_b;
    if (s == "++" || s == "--") return MutationOperator::aor_s;
    if (s == "&" || s == "|" || s == "^")
        return is_binary_position(tokens, i) ? std::optional(MutationOperator::lor)
                                             : std::nullopt;
    if (s == "<<" || s == ">>" || s == ">>>") {
        if (!is_binary_position(tokens, i)) return std::nullopt;
        if (s != "<<" && looks_like_generic_close(tokens, i)) return std::nullopt;
        return MutationOperator::sor;
    }
    if (s == ">=" || s == "<=" || s == "==" || s == "!=") return MutationOperator::ror;
    if (s == ">")
        return looks_like_generic_close(tokens, i) ? std::nullopt
                                                   : std::optional(MutationOperator::ror);
    if (s == "<")
        return looks_like_generic_open(tokens, i) ? std::nullopt
                                                  : std::optional(MutationOperator::ror);
    if (s == "&&" || s == "||") return MutationOperator::cor;
    if (s == "!") return MutationOperator::cod;
    if (s == "*=" || s == "/=" || s == "+=" || s == "-=" || s == "%=")
        return MutationOperator::saor;
    return std::nullopt;
}

} // namespace detail

// One MutationPoint per eligible operator occurrence, in token order.
inline std::vector<MutationPoint> find_mutation_points(const std::vector<Token>& tokens) {
    std::vector<MutationPoint> points;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind != TokenKind::operator_symbol) continue;
        std::optional<MutationOperator> op = detail::classify(tokens, i);
        if (!op) continue;
        std::optional<std::string_view> repl = operator_replacement(*op, tokens[i].text);
        if (!repl) continue;
        MutationPoint p;
        p.op = *op;
        p.token_index = i;
        p.replacement_text.assign(*repl);
        p.line = tokens[i].line;
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace mutsamp
