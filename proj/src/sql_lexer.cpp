#include "ssf/sql_lexer.hpp"

#include <algorithm>
#include <iterator>
#include <cctype>

namespace ssf {

namespace {

constexpr std::string_view kKeywords[] = {
    "all",    "alter",  "and",    "as",      "asc",     "between", "by",
    "case",   "create", "cross",  "delete",  "desc",    "distinct", "drop",
    "else",   "end",    "exec",   "execute", "exists",  "false",   "from",
    "group",  "having", "in",     "inner",   "insert",  "into",    "is",
    "join",   "left",   "like",   "limit",   "natural", "not",     "null",
    "on",     "or",     "order",  "outer",   "right",   "select",  "set",
    "true",   "truncate", "union", "update", "where",
};

// Longest first so that maximal munch falls out of a linear scan.
constexpr std::string_view kOperators[] = {
    "<=>", "<>", "!=", "<=", ">=", "||", "&&", "<<", ">>",
    "=",   "<",  ">",  "*",  "+",  "-",  "/",  "%",  "!", "|", "&",
};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        while (pos_ < src_.size()) {
            const auto c = static_cast<unsigned char>(src_[pos_]);
            if (std::isspace(c)) {
                ++pos_;
            } else if (c == '-' && peek(1) == '-') {
                line_comment();
            } else if (c == '/' && peek(1) == '*') {
                block_comment();
            } else if (c == '\'') {
                quoted('\'', TokenKind::string_literal);
            } else if (c == '"' || c == '`') {
                quoted(static_cast<char>(c), TokenKind::identifier);
            } else if (c == '0' && (peek(1) == 'x' || peek(1) == 'X') &&
                       std::isxdigit(static_cast<unsigned char>(peek(2)))) {
                hex();
            } else if (std::isdigit(c)) {
                number();
            } else if (is_ident_start(c)) {
                word();
            } else if (c == '?') {
                emit(TokenKind::parameter_marker, pos_ + 1);
            } else if (c == ',' || c == '(' || c == ')' || c == ';' || c == '.') {
                emit(TokenKind::punctuation, pos_ + 1);
            } else if (!operator_token()) {
                emit(TokenKind::malformed, pos_ + 1);
            }
        }
        return std::move(out_);
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void emit(TokenKind kind, std::size_t end) {
        out_.push_back(Token{kind, std::string(src_.substr(pos_, end - pos_)), pos_});
        pos_ = end;
    }

    void line_comment() {
        auto end = src_.find('\n', pos_);
        emit(TokenKind::comment, end == std::string_view::npos ? src_.size() : end);
    }

    void block_comment() {
        auto close = src_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) {
            emit(TokenKind::malformed, src_.size());
        } else {
            emit(TokenKind::comment, close + 2);
        }
    }

    // Doubled quotes escape themselves; backslash escapes the next byte
    // (MySQL semantics).
    void quoted(char quote, TokenKind kind) {
        std::size_t i = pos_ + 1;
        while (i < src_.size()) {
            if (src_[i] == '\\' && quote == '\'') {
                i += 2;
                continue;
            }
            if (src_[i] == quote) {
                if (i + 1 < src_.size() && src_[i + 1] == quote) {
                    i += 2;
                    continue;
                }
                emit(kind, i + 1);
                return;
            }
            ++i;
        }
        emit(TokenKind::malformed, src_.size());
    }

    void hex() {
        std::size_t i = pos_ + 2;
        while (i < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[i]))) ++i;
        emit(TokenKind::hex_literal, i);
    }

    // Decimal and exponent forms are kept in one integer_literal token; the
    // parser classifies anything that is not all digits as other_literal.
    void number() {
        std::size_t i = pos_;
        auto digits = [&] {
            while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
        };
        digits();
        if (i + 1 < src_.size() && src_[i] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[i + 1]))) {
            ++i;
            digits();
        }
        if (i + 1 < src_.size() && (src_[i] == 'e' || src_[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
            if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
                i = j;
                digits();
            }
        }
        emit(TokenKind::integer_literal, i);
    }

    void word() {
        std::size_t i = pos_;
        while (i < src_.size() && is_ident_char(static_cast<unsigned char>(src_[i]))) ++i;
        auto text = src_.substr(pos_, i - pos_);
        emit(is_sql_keyword(to_lower(text)) ? TokenKind::keyword : TokenKind::identifier, i);
    }

    bool operator_token() {
        for (auto op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                emit(TokenKind::op, pos_ + op.size());
                return true;
            }
        }
        return false;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::vector<Token> out_;
};

} // namespace

const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::identifier: return "identifier";
        case TokenKind::keyword: return "keyword";
        case TokenKind::integer_literal: return "integer_literal";
        case TokenKind::string_literal: return "string_literal";
        case TokenKind::hex_literal: return "hex_literal";
        case TokenKind::parameter_marker: return "parameter_marker";
        case TokenKind::op: return "operator";
        case TokenKind::punctuation: return "punctuation";
        case TokenKind::comment: return "comment";
        case TokenKind::malformed: return "malformed";
    }
    return "unknown";
}

bool Token::is(std::string_view lower_word) const {
    if (lexeme.size() != lower_word.size()) return false;
    for (std::size_t i = 0; i < lexeme.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(lexeme[i])) != lower_word[i]) return false;
    }
    return true;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_sql_keyword(std::string_view word) {
    const std::string lower = to_lower(word);
    return std::find(std::begin(kKeywords), std::end(kKeywords), lower) != std::end(kKeywords);
}

std::vector<Token> tokenize(std::string_view source) {
    return Lexer(source).run();
}

std::string normalize_identifier(std::string_view raw) {
    if (raw.size() >= 2) {
        const char first = raw.front();
        if ((first == '`' || first == '"') && raw.back() == first) {
            raw = raw.substr(1, raw.size() - 2);
        }
    }
    return to_lower(raw);
}

} // namespace ssf
