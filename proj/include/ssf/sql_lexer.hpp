#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ssf {

enum class TokenKind {
    identifier,
    keyword,
    integer_literal,
    string_literal,
    hex_literal,
    parameter_marker,
    op,            // comparison / arithmetic operators
    punctuation,   // , ( ) ; .
    comment,
    malformed,
};

const char* to_string(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::malformed;
    std::string lexeme;     // exact source bytes
    std::size_t offset = 0; // byte index into the source

    std::size_t end() const { return offset + lexeme.size(); }

    /// Case-insensitive comparison of the lexeme against a lowercase word.
    bool is(std::string_view lower_word) const;
    bool is_keyword(std::string_view lower_word) const {
        return kind == TokenKind::keyword && is(lower_word);
    }

    bool operator==(const Token&) const = default;
};

/// Splits arbitrary text into tokens. Never fails: bytes the lexer does not
/// understand become `malformed` tokens, and an unterminated string, quoted
/// identifier or block comment becomes a single `malformed` token running to
/// the end of the input. Whitespace is not tokenized; token offsets let the
/// caller recover it.
std::vector<Token> tokenize(std::string_view source);

/// Lowercase fold plus removal of one pair of surrounding backticks or
/// double quotes.
std::string normalize_identifier(std::string_view raw);

bool is_sql_keyword(std::string_view word);

std::string to_lower(std::string_view text);

} // namespace ssf
