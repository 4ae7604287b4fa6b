#pragma once

#include "ssf/sql_lexer.hpp"

#include <span>
#include <string>
#include <vector>

namespace ssf {

enum class CommandType { select, other };
enum class Comparator { eq, neq, lt, gt, le, ge, like, other };
enum class LogicalOperator { and_, or_ };
enum class SetOperator { union_, union_all };

const char* to_string(LogicalOperator op);
const char* to_string(SetOperator op);

enum class OperandKind { attribute, integer_literal, string_literal, other_literal };

struct Operand {
    OperandKind kind = OperandKind::other_literal;
    // Lowercase identifier for attributes, raw source text for literals.
    std::string name;

    bool is_attribute() const { return kind == OperandKind::attribute; }
    bool operator==(const Operand&) const = default;
};

struct PredicateTerm {
    Operand lhs;
    Operand rhs;
    Comparator comparator = Comparator::eq;
    bool operator==(const PredicateTerm&) const = default;
};

struct SetOperation;

struct ParsedQuery {
    CommandType command_type = CommandType::other;
    std::vector<std::string> projection;   // "*" for the star marker
    std::vector<std::string> from_tables;
    std::vector<PredicateTerm> predicates;
    std::vector<LogicalOperator> logical_operators;
    std::vector<std::string> order_by;     // identifiers or positional integers
    std::vector<SetOperation> set_operations;
    std::vector<Token> residual_tokens;    // in source order
    int statement_count = 1;

    bool operator==(const ParsedQuery&) const;
};

struct SetOperation {
    SetOperator op = SetOperator::union_;
    ParsedQuery query;
    bool operator==(const SetOperation&) const = default;
};

/// Best-effort parse of the SELECT subset. Tokens the grammar cannot place
/// are collected in `residual_tokens`; nested UNION members never carry
/// residuals of their own. Non-SELECT input yields `CommandType::other`
/// with every token residual.
ParsedQuery parse_select(std::span<const Token> tokens);

/// tokenize + parse_select.
ParsedQuery parse_sql(std::string_view source);

/// True when an ORDER BY entry is a positional reference (`order by 1`).
bool is_positional(std::string_view order_by_entry);

} // namespace ssf
