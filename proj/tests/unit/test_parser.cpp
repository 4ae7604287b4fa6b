#include "ssf/sql_parser.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

using namespace ssf;

namespace {

std::vector<std::string> residual_lexemes(const ParsedQuery& q) {
    std::vector<std::string> out;
    for (const auto& t : q.residual_tokens) out.push_back(t.lexeme);
    return out;
}

} // namespace

TEST(Parser, TrainingQueryOne) {
    auto q = parse_sql("Select username, password from admin where id=?");
    EXPECT_EQ(q.command_type, CommandType::select);
    EXPECT_EQ(q.projection, (std::vector<std::string>{"username", "password"}));
    EXPECT_EQ(q.from_tables, std::vector<std::string>{"admin"});
    ASSERT_EQ(q.predicates.size(), 1u);
    EXPECT_EQ(q.predicates[0].lhs, (Operand{OperandKind::attribute, "id"}));
    EXPECT_EQ(q.predicates[0].rhs.kind, OperandKind::other_literal);
    EXPECT_TRUE(q.residual_tokens.empty());
    EXPECT_EQ(q.statement_count, 1);
}

TEST(Parser, WhereWithLogicalOperatorAndOrderBy) {
    auto q = parse_sql("select username, product from Admin where salary<100 and IsActive='y' order by username desc");
    ASSERT_EQ(q.predicates.size(), 2u);
    EXPECT_EQ(q.predicates[0].comparator, Comparator::lt);
    EXPECT_EQ(q.predicates[0].rhs.kind, OperandKind::integer_literal);
    EXPECT_EQ(q.predicates[1].lhs.name, "isactive");
    EXPECT_EQ(q.predicates[1].rhs.kind, OperandKind::string_literal);
    EXPECT_EQ(q.logical_operators, std::vector<LogicalOperator>{LogicalOperator::and_});
    EXPECT_EQ(q.order_by, std::vector<std::string>{"username"});
    EXPECT_EQ(q.from_tables, std::vector<std::string>{"admin"});
    EXPECT_TRUE(q.residual_tokens.empty());
}

TEST(Parser, TautologyAttackLeavesCommentResidual) {
    auto q = parse_sql("Select username, password from Admin where id=1 or 1=1--");
    ASSERT_EQ(q.predicates.size(), 2u);
    EXPECT_EQ(q.predicates[1].lhs, (Operand{OperandKind::integer_literal, "1"}));
    EXPECT_EQ(q.logical_operators, std::vector<LogicalOperator>{LogicalOperator::or_});
    EXPECT_EQ(residual_lexemes(q), std::vector<std::string>{"--"});
}

TEST(Parser, BrokenTermResyncsAtConnector) {
    auto q = parse_sql("Select username, password from admin where fname= or 1=1 - -");
    ASSERT_EQ(q.predicates.size(), 1u);
    EXPECT_EQ(q.predicates[0].lhs.name, "1");
    EXPECT_EQ(residual_lexemes(q), (std::vector<std::string>{"fname", "=", "or", "-", "-"}));
}

TEST(Parser, TrailingQuoteIsResidual) {
    auto q = parse_sql("Select username, password from admin where id=5'");
    ASSERT_EQ(q.predicates.size(), 1u);
    EXPECT_EQ(residual_lexemes(q), std::vector<std::string>{"'"});
}

TEST(Parser, UnionMembers) {
    auto q = parse_sql("select a from t where id=-10 union select b from u union all select c from v");
    ASSERT_EQ(q.set_operations.size(), 2u);
    EXPECT_EQ(q.set_operations[0].op, SetOperator::union_);
    EXPECT_EQ(q.set_operations[1].op, SetOperator::union_all);
    EXPECT_EQ(q.set_operations[1].query.from_tables, std::vector<std::string>{"v"});
    EXPECT_EQ(q.predicates[0].rhs.kind, OperandKind::integer_literal);
    EXPECT_TRUE(q.residual_tokens.empty());
}

TEST(Parser, UnionWithLiteralProjectionIsResidual) {
    auto q = parse_sql("select a from t where id=-10 union select 1, 2, version(), 4, 5--");
    EXPECT_EQ(q.set_operations.size(), 1u);
    EXPECT_FALSE(q.residual_tokens.empty());
}

TEST(Parser, StatementCount) {
    EXPECT_EQ(parse_sql("select a from t;").statement_count, 1);
    EXPECT_TRUE(parse_sql("select a from t;").residual_tokens.empty());
    auto stacked = parse_sql("select a from t; drop table t");
    EXPECT_EQ(stacked.statement_count, 2);
    EXPECT_FALSE(stacked.residual_tokens.empty());
}

TEST(Parser, NonSelect) {
    auto q = parse_sql("DELETE FROM admin WHERE id=1");
    EXPECT_EQ(q.command_type, CommandType::other);
    EXPECT_EQ(q.residual_tokens.size(), 7u);
}

TEST(Parser, PositionalOrderBy) {
    auto q = parse_sql("Select * from admin where ID=10 order by 1");
    EXPECT_EQ(q.projection, std::vector<std::string>{"*"});
    EXPECT_EQ(q.order_by, std::vector<std::string>{"1"});
    EXPECT_TRUE(is_positional("1"));
    EXPECT_FALSE(is_positional("username"));
    EXPECT_FALSE(is_positional(""));
}

TEST(ParserProperty, EveryTokenIsConsumedOrResidualOnce) {
    testkit::Rng rng(5);
    for (int i = 0; i < 3000; ++i) {
        const std::string src = testkit::random_sqlish(rng, 25);
        const auto toks = tokenize(src);
        const auto q = parse_select(toks);
        // Residuals are real tokens of the input, in source order.
        std::size_t last = 0;
        bool first = true;
        for (const auto& r : q.residual_tokens) {
            auto it = std::find(toks.begin(), toks.end(), r);
            ASSERT_NE(it, toks.end());
            if (!first) ASSERT_GT(r.offset, last);
            last = r.offset;
            first = false;
        }
        ASSERT_LE(q.residual_tokens.size(), toks.size());
        if (q.command_type == CommandType::other) ASSERT_EQ(q.residual_tokens.size(), toks.size());
    }
}
