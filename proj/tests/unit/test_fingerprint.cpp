#include "ssf/fingerprint.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

using namespace ssf;

namespace {

QueryFingerprint fp_of(std::string_view sql) { return abstract_literals(parse_sql(sql)); }

} // namespace

TEST(Fingerprint, LiteralsCollapseToClasses) {
    auto fp = fp_of("select a from t where x=42 and y='s' and z=? and w=v");
    ASSERT_EQ(fp.terms.size(), 4u);
    EXPECT_EQ(fp.terms[0].rhs.cls, OperandClass::integer_literal);
    EXPECT_EQ(fp.terms[1].rhs.cls, OperandClass::string_literal);
    EXPECT_EQ(fp.terms[2].rhs.cls, OperandClass::other_literal);
    EXPECT_EQ(fp.terms[3].rhs, (AbstractOperand{OperandClass::attribute, "v"}));
    EXPECT_TRUE(fp.terms[0].rhs.name.empty());
    EXPECT_EQ(std::string(literal_class_name(OperandClass::integer_literal)), "Integer_literal");
}

TEST(Fingerprint, ComparatorIsDropped) {
    EXPECT_EQ(fp_of("select a from t where id=?"), fp_of("select a from t where id<?"));
}

TEST(Fingerprint, NonSelectThrows) {
    EXPECT_THROW(fp_of("update t set a=1"), FingerprintError);
}

TEST(Fingerprint, StructuralEqualsIgnoresLiteralClass) {
    EXPECT_TRUE(structural_equals(fp_of("select a from t where id=42"), fp_of("select a from t where id=?")));
    EXPECT_TRUE(structural_equals(fp_of("select a from t where id='x'"), fp_of("select a from t where id=7")));
    EXPECT_FALSE(structural_equals(fp_of("select a from t where id=1"), fp_of("select a from t where id=b")));
    EXPECT_FALSE(structural_equals(fp_of("select a from t where id=1"), fp_of("select a from t where id=1'")));
    EXPECT_FALSE(structural_equals(fp_of("select a from t where id=1 and b=2"),
                                   fp_of("select a from t where id=1 or b=2")));
    EXPECT_FALSE(structural_equals(fp_of("select a from t order by a"), fp_of("select a from t order by 1")));
}

TEST(Fingerprint, RepositoryKeyAndLookup) {
    FingerprintRepository repo;
    repo.add(fp_of("select username, password from admin where id=?"));
    repo.add(fp_of("select * from admin where username=?"));
    repo.add(fp_of("select username, password from admin where id<?"));
    auto key = repository_key(fp_of("Select username, password from Admin"));
    EXPECT_EQ(to_string(key), "username,password|admin");
    auto hits = repo.lookup(key);
    ASSERT_EQ(hits.size(), 2u);
    EXPECT_EQ(hits[0], &repo.entries()[0]);
    EXPECT_EQ(hits[1], &repo.entries()[2]);
    EXPECT_TRUE(repo.lookup(repository_key(fp_of("select password, username from admin"))).empty());
}

TEST(FingerprintProperty, StructuralEqualsIsAnEquivalence) {
    testkit::Rng rng(3);
    std::vector<QueryFingerprint> fps;
    for (int i = 0; i < 60; ++i) fps.push_back(testkit::random_fingerprint(rng));
    // Add near-duplicates that differ only in literal class.
    for (int i = 0; i < 60; ++i) {
        auto copy = fps[static_cast<std::size_t>(i)];
        for (auto& t : copy.terms) {
            if (!t.rhs.is_attribute()) t.rhs = testkit::random_literal(rng);
        }
        fps.push_back(copy);
    }
    for (const auto& a : fps) {
        ASSERT_TRUE(structural_equals(a, a));
        for (const auto& b : fps) {
            ASSERT_EQ(structural_equals(a, b), structural_equals(b, a));
            if (!structural_equals(a, b)) continue;
            for (const auto& c : fps) {
                if (structural_equals(b, c)) ASSERT_TRUE(structural_equals(a, c));
            }
        }
    }
}
