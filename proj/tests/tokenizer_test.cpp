#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "mutsamp/token.hpp"

using namespace mutsamp;

namespace {

std::string rejoin(const std::vector<Token>& tokens) {
    std::string out;
    for (const Token& t : tokens) out += t.text;
    return out;
}

std::vector<Token> significant(const std::vector<Token>& tokens) {
    std::vector<Token> out;
    for (const Token& t : tokens)
        if (t.kind != TokenKind::whitespace && t.kind != TokenKind::comment) out.push_back(t);
    return out;
}

} // namespace

TEST_CASE("simple expression lexes into identifiers and operator") {
    auto tokens = tokenize("a + b");
    REQUIRE(tokens.size() == 5);
    CHECK(tokens[0].kind == TokenKind::identifier);
    CHECK(tokens[0].text == "a");
    CHECK(tokens[1].kind == TokenKind::whitespace);
    CHECK(tokens[2].kind == TokenKind::operator_symbol);
    CHECK(tokens[2].text == "+");
    CHECK(tokens[4].text == "b");
}

TEST_CASE("string literal masks operators") {
    auto tokens = tokenize("\"a + b\"");
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0].kind == TokenKind::string_literal);
    for (const Token& t : tokens) CHECK(t.kind != TokenKind::operator_symbol);
}

TEST_CASE("comment masks operators") {
    auto tokens = tokenize("x /*+*/ - y");
    int operators = 0;
    std::string op_text;
    for (const Token& t : tokens)
        if (t.kind == TokenKind::operator_symbol) {
            ++operators;
            op_text = t.text;
        }
    CHECK(operators == 1);
    CHECK(op_text == "-");
}

TEST_CASE("line comment runs to end of line") {
    auto tokens = tokenize("a // + *\nb");
    auto sig = significant(tokens);
    REQUIRE(sig.size() == 2);
    CHECK(sig[0].text == "a");
    CHECK(sig[1].text == "b");
}

TEST_CASE("escapes inside literals do not terminate them") {
    auto tokens = tokenize(R"("she said \"a + b\"" + 'x')");
    auto sig = significant(tokens);
    REQUIRE(sig.size() == 3);
    CHECK(sig[0].kind == TokenKind::string_literal);
    CHECK(sig[1].text == "+");
    CHECK(sig[2].kind == TokenKind::char_literal);
}

TEST_CASE("round trip reproduces input byte for byte") {
    const std::string source =
        "package p;\n"
        "import java.util.*;\n"
        "/* block\n comment */\n"
        "public class C {\n"
        "  int f(int a, int b) { return a + b * 2 - -1; } // trailing\n"
        "  boolean g() { return x >= 1 && !done || list.isEmpty(); }\n"
        "  String s = \"quoted // not a comment /* nope */\";\n"
        "  char c = '\\'';\n"
        "  double d = 1e+5 + 0x1Fp-2;\n"
        "}\n";
    auto tokens = tokenize(source);
    CHECK(rejoin(tokens) == source);
}

TEST_CASE("round trip holds on randomized operator-dense soup") {
    std::mt19937 gen(20240817);
    const std::vector<std::string> pieces = {
        "a",  "bb",  "x9",   "12",  "3.5", "+",  "-",  "*",  "/",   "%",    "<<",  ">>",
        ">=", "<=",  "==",   "!=",  "&&",  "||", "!",  "&",  "|",   "^",    "++",  "--",
        "+=", "-=",  "\"s\"", "'c'", "(",   ")",  "{",  "}",  ";",   ",",    " ",   "\n",
        "\t", "// c\n",       "/* c */",   "return", "case", "=",   "?",    ":",
    };
    for (int iter = 0; iter < 200; ++iter) {
        std::string source;
        const int parts = 1 + static_cast<int>(gen() % 60);
        for (int k = 0; k < parts; ++k) source += pieces[gen() % pieces.size()];
        std::vector<Token> tokens;
        try {
            tokens = tokenize(source);
        } catch (const TokenizeError&) {
            // adjacent "/" and "*" pieces can open a block comment; close it
            source += " */";
            tokens = tokenize(source);
        }
        CHECK(rejoin(tokens) == source);
    }
}

TEST_CASE("exponent signs stay inside number literals") {
    auto sig = significant(tokenize("y = 1e+5;"));
    REQUIRE(sig.size() == 4);
    CHECK(sig[2].kind == TokenKind::number_literal);
    CHECK(sig[2].text == "1e+5");
}

TEST_CASE("line and column positions are 1-based") {
    auto tokens = tokenize("ab\n  cd");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].line == 1);
    CHECK(tokens[0].column == 1);
    CHECK(tokens[2].line == 2);
    CHECK(tokens[2].column == 3);
    CHECK(tokens[2].byte_offset == 5);
}

TEST_CASE("unterminated string reports its line") {
    try {
        tokenize("int a;\nString s = \"oops;\n");
        FAIL("expected TokenizeError");
    } catch (const TokenizeError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("unterminated block comment is an error") {
    CHECK_THROWS_AS(tokenize("a /* never closed"), TokenizeError);
}

TEST_CASE("non-UTF-8 input is rejected") {
    std::string bad = "int a;\n";
    bad += static_cast<char>(0xC0); // overlong lead byte
    bad += static_cast<char>(0x20);
    CHECK_THROWS_AS(tokenize(bad), TokenizeError);
}

TEST_CASE("UTF-8 identifiers are accepted and lossless") {
    const std::string source = "int caf\xC3\xA9 = 1;";
    auto tokens = tokenize(source);
    CHECK(rejoin(tokens) == source);
}

TEST_CASE("maximal munch keeps compound operators whole") {
    auto sig = significant(tokenize("a >>>= b; c >>> d; e != f; g && h; i++;"));
    std::vector<std::string> ops;
    for (const Token& t : sig)
        if (t.kind == TokenKind::operator_symbol) ops.push_back(t.text);
    CHECK(ops == std::vector<std::string>{">>>=", ">>>", "!=", "&&", "++"});
}
