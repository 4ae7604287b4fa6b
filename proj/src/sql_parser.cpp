#include "ssf/sql_parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace ssf {

namespace {

// Keywords (or ",") at which error recovery resumes.
using SyncSet = std::vector<std::string_view>;

// Cursor over the grammar region of one statement. Tokens are marked as
// consumed as the grammar accepts them; whatever is left unmarked becomes
// residual, so no token can be lost.
class Parser {
public:
    Parser(std::span<const Token> tokens, std::vector<bool>& used, std::size_t begin,
           std::size_t end)
        : toks_(tokens), used_(used), pos_(begin), end_(end) {}

    std::size_t pos() const { return pos_; }
    bool at_end() const { return pos_ >= end_; }

    const Token* peek(std::size_t ahead = 0) const {
        return pos_ + ahead < end_ ? &toks_[pos_ + ahead] : nullptr;
    }

    bool peek_keyword(std::string_view word, std::size_t ahead = 0) const {
        const Token* t = peek(ahead);
        return t && t->is_keyword(word);
    }

    bool peek_punct(char c, std::size_t ahead = 0) const {
        const Token* t = peek(ahead);
        return t && t->kind == TokenKind::punctuation && t->lexeme[0] == c;
    }

    void consume(std::size_t count = 1) {
        for (std::size_t i = 0; i < count; ++i) used_[pos_ + i] = true;
        pos_ += count;
    }

    // Parses SELECT ... [FROM ...] [WHERE ...] [ORDER BY ...]. Stops in front
    // of UNION or at the end of the region.
    void core(ParsedQuery& q) {
        q.command_type = CommandType::select;
        consume(); // select
        projection(q);
        if (peek_keyword("from")) {
            consume();
            tables(q);
        }
        if (peek_keyword("where")) {
            consume();
            where(q);
        }
        if (peek_keyword("order") && peek_keyword("by", 1)) {
            consume(2);
            order_by(q);
        }
        skip_until({"union"});
    }

private:
    bool at_sync(const SyncSet& keywords) const {
        const Token* t = peek();
        if (!t) return true;
        for (auto kw : keywords) {
            if (kw == ",") {
                if (peek_punct(',')) return true;
            } else if (t->is_keyword(kw)) {
                return true;
            }
        }
        return false;
    }

    // Leaves tokens unconsumed until a sync point at parenthesis depth zero.
    void skip_until(const SyncSet& sync) {
        int depth = 0;
        while (!at_end()) {
            if (depth == 0 && at_sync(sync)) return;
            if (peek_punct('(')) ++depth;
            if (peek_punct(')') && depth > 0) --depth;
            ++pos_;
        }
    }

    // identifier [ '.' (identifier | '*') ]
    std::optional<std::string> qualified_name(std::size_t& width, bool allow_star) const {
        const Token* t = peek();
        if (!t || t->kind != TokenKind::identifier) return std::nullopt;
        std::string name = normalize_identifier(t->lexeme);
        width = 1;
        if (peek_punct('.', 1)) {
            const Token* next = peek(2);
            if (next && next->kind == TokenKind::identifier) {
                name += "." + normalize_identifier(next->lexeme);
                width = 3;
            } else if (allow_star && next && next->kind == TokenKind::op && next->lexeme == "*") {
                name += ".*";
                width = 3;
            } else {
                return std::nullopt;
            }
        }
        return name;
    }

    template <class Item>
    void comma_list(const SyncSet& stop, Item item) {
        SyncSet item_stop = stop;
        item_stop.push_back(",");
        while (!at_end() && !at_sync(stop)) {
            if (!item()) skip_until(item_stop);
            if (peek_punct(',')) {
                consume();
            } else if (!at_sync(stop)) {
                skip_until(stop);
            }
        }
    }

    void projection(ParsedQuery& q) {
        comma_list({"from", "union"}, [&] {
            const Token* t = peek();
            std::size_t width = 0;
            std::optional<std::string> name;
            if (t->kind == TokenKind::op && t->lexeme == "*") {
                name = "*";
                width = 1;
            } else {
                name = qualified_name(width, true);
            }
            if (!name || !item_ends(width, {",", "from", "union"})) return false;
            q.projection.push_back(*name);
            consume(width);
            return true;
        });
    }

    void tables(ParsedQuery& q) {
        comma_list({"where", "order", "union"}, [&] {
            std::size_t width = 0;
            auto name = qualified_name(width, false);
            if (!name || !item_ends(width, {",", "where", "order", "union"})) return false;
            q.from_tables.push_back(*name);
            consume(width);
            return true;
        });
    }

    void order_by(ParsedQuery& q) {
        comma_list({"union"}, [&] {
            const Token* t = peek();
            std::size_t width = 0;
            std::optional<std::string> name;
            if (t->kind == TokenKind::integer_literal && is_positional(t->lexeme)) {
                name = t->lexeme;
                width = 1;
            } else {
                name = qualified_name(width, false);
            }
            if (!name) return false;
            std::size_t total = width;
            if (peek_keyword("asc", width) || peek_keyword("desc", width)) ++total;
            if (!item_ends(total, {",", "union"})) return false;
            q.order_by.push_back(*name);
            consume(total);
            return true;
        });
    }

    bool item_ends(std::size_t width, const SyncSet& sync) {
        const std::size_t saved = pos_;
        pos_ += width;
        const bool ok = at_sync(sync);
        pos_ = saved;
        return ok;
    }

    std::optional<Operand> operand(std::size_t& width) const {
        const Token* t = peek();
        if (!t) return std::nullopt;
        width = 1;
        switch (t->kind) {
            case TokenKind::identifier: {
                auto name = qualified_name(width, false);
                if (!name || peek_punct('(', width)) return std::nullopt; // function call
                return Operand{OperandKind::attribute, *name};
            }
            case TokenKind::integer_literal:
                return Operand{is_positional(t->lexeme) ? OperandKind::integer_literal
                                                        : OperandKind::other_literal,
                               t->lexeme};
            case TokenKind::string_literal:
                return Operand{OperandKind::string_literal, t->lexeme};
            case TokenKind::hex_literal:
                return Operand{OperandKind::other_literal, t->lexeme};
            case TokenKind::parameter_marker:
                return Operand{OperandKind::other_literal, "?"};
            case TokenKind::keyword:
                if (t->is("null") || t->is("true") || t->is("false")) {
                    return Operand{OperandKind::other_literal, to_lower(t->lexeme)};
                }
                return std::nullopt;
            case TokenKind::op: {
                const Token* next = peek(1);
                if ((t->lexeme == "-" || t->lexeme == "+") && next &&
                    next->kind == TokenKind::integer_literal) {
                    width = 2;
                    return Operand{is_positional(next->lexeme) ? OperandKind::integer_literal
                                                               : OperandKind::other_literal,
                                   t->lexeme + next->lexeme};
                }
                return std::nullopt;
            }
            default:
                return std::nullopt;
        }
    }

    std::optional<Comparator> comparator(std::size_t ahead, std::size_t& width) const {
        const Token* t = peek(ahead);
        if (!t) return std::nullopt;
        width = 1;
        if (t->kind == TokenKind::op) {
            const std::string& s = t->lexeme;
            if (s == "=") return Comparator::eq;
            if (s == "<>" || s == "!=") return Comparator::neq;
            if (s == "<") return Comparator::lt;
            if (s == ">") return Comparator::gt;
            if (s == "<=") return Comparator::le;
            if (s == ">=") return Comparator::ge;
            if (s == "<=>") return Comparator::other;
            return std::nullopt;
        }
        if (t->is_keyword("like")) return Comparator::like;
        if (t->is_keyword("not") && peek_keyword("like", ahead + 1)) {
            width = 2;
            return Comparator::other;
        }
        return std::nullopt;
    }

    std::optional<PredicateTerm> term(std::size_t& width) {
        std::size_t lw = 0, cw = 0, rw = 0;
        auto lhs = operand(lw);
        if (!lhs) return std::nullopt;
        auto cmp = comparator(lw, cw);
        if (!cmp) return std::nullopt;
        const std::size_t saved = pos_;
        pos_ += lw + cw;
        auto rhs = operand(rw);
        pos_ = saved;
        if (!rhs) return std::nullopt;
        width = lw + cw + rw;
        return PredicateTerm{std::move(*lhs), std::move(*rhs), *cmp};
    }

    // Terms joined by AND/OR. A malformed term is skipped up to the next
    // connector; the connector that led into it is left residual.
    void where(ParsedQuery& q) {
        std::optional<std::size_t> pending;
        const SyncSet clause_end = {"order", "union"};
        while (!at_end() && !at_sync(clause_end)) {
            std::size_t width = 0;
            if (auto t = term(width)) {
                if (pending) {
                    used_[*pending] = true;
                    q.logical_operators.push_back(toks_[*pending].is("and")
                                                      ? LogicalOperator::and_
                                                      : LogicalOperator::or_);
                    pending.reset();
                }
                q.predicates.push_back(std::move(*t));
                consume(width);
            } else {
                pending.reset();
            }
            skip_until({"and", "or", "order", "union"});
            if (peek_keyword("and") || peek_keyword("or")) {
                if (!q.predicates.empty()) pending = pos_;
                ++pos_;
            }
        }
    }

    std::span<const Token> toks_;
    std::vector<bool>& used_;
    std::size_t pos_;
    std::size_t end_;
};

int count_statements(std::span<const Token> tokens) {
    int count = 0;
    bool has_content = false;
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::punctuation && t.lexeme == ";") {
            if (has_content) ++count;
            has_content = false;
        } else if (t.kind != TokenKind::comment) {
            has_content = true;
        }
    }
    if (has_content) ++count;
    return std::max(count, 1);
}

} // namespace

const char* to_string(LogicalOperator op) {
    return op == LogicalOperator::and_ ? "and" : "or";
}

const char* to_string(SetOperator op) {
    return op == SetOperator::union_ ? "union" : "union all";
}

bool ParsedQuery::operator==(const ParsedQuery& o) const {
    return command_type == o.command_type && projection == o.projection &&
           from_tables == o.from_tables && predicates == o.predicates &&
           logical_operators == o.logical_operators && order_by == o.order_by &&
           set_operations == o.set_operations && residual_tokens == o.residual_tokens &&
           statement_count == o.statement_count;
}

bool is_positional(std::string_view entry) {
    return !entry.empty() && std::all_of(entry.begin(), entry.end(), [](unsigned char c) {
        return std::isdigit(c);
    });
}

ParsedQuery parse_select(std::span<const Token> tokens) {
    ParsedQuery q;
    q.statement_count = count_statements(tokens);
    std::vector<bool> used(tokens.size(), false);

    std::size_t begin = 0;
    while (begin < tokens.size() && tokens[begin].kind == TokenKind::comment) ++begin;
    std::size_t end = begin;
    while (end < tokens.size() && tokens[end].kind != TokenKind::comment &&
           !(tokens[end].kind == TokenKind::punctuation && tokens[end].lexeme == ";")) {
        ++end;
    }

    if (begin < end && tokens[begin].is_keyword("select")) {
        Parser p(tokens, used, begin, end);
        p.core(q);
        while (p.peek_keyword("union")) {
            const bool all = p.peek_keyword("all", 1);
            const std::size_t width = all ? 2 : 1;
            if (!p.peek_keyword("select", width)) break;
            p.consume(width);
            SetOperation set{all ? SetOperator::union_all : SetOperator::union_, {}};
            p.core(set.query);
            q.set_operations.push_back(std::move(set));
        }
        // Optional trailing ';' of a single statement.
        if (end < tokens.size() && tokens[end].kind == TokenKind::punctuation &&
            q.statement_count == 1) {
            bool only_comments_after = true;
            for (std::size_t i = end + 1; i < tokens.size(); ++i) {
                if (tokens[i].kind != TokenKind::comment) only_comments_after = false;
            }
            if (only_comments_after) used[end] = true;
        }
    }

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!used[i]) q.residual_tokens.push_back(tokens[i]);
    }
    return q;
}

ParsedQuery parse_sql(std::string_view source) {
    return parse_select(tokenize(source));
}

} // namespace ssf
