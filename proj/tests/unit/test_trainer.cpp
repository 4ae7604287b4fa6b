#include "ssf/trainer.hpp"

#include "ssf/detector.hpp"
#include "ssf/repository_xml.hpp"

#include "generators.hpp"
#include "sec5_fixture.hpp"
#include "temp_dir.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

using namespace ssf;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST(ReadLog, RecordsCommentsAndTsv) {
    auto recs = read_log("# header\n\nselect a from t\n2024-01-01T00:00:00\tapp\tselect * from t\n  \n");
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].line_number, 3u);
    EXPECT_EQ(recs[1].sql, "select * from t");
    EXPECT_EQ(recs[1].line_number, 4u);
    EXPECT_TRUE(read_log("# only\n\n").empty());
    EXPECT_EQ(read_log(testkit::sec5_log()).size(), 4u);
}

TEST(ReadLog, TabsWithoutTimestampAreKept) {
    auto recs = read_log("select a\tfrom t\tx\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].sql, "select a\tfrom t\tx");
}

TEST(ReadLog, InvalidUtf8NamesOffset) {
    EXPECT_EQ(find_invalid_utf8("ok \xc3\xa9"), std::nullopt);
    EXPECT_EQ(find_invalid_utf8("ab\xff"), std::optional<std::size_t>(2));
    EXPECT_EQ(find_invalid_utf8("\xc0\x80"), std::optional<std::size_t>(0)); // overlong
    EXPECT_EQ(find_invalid_utf8("x\xe2\x82"), std::optional<std::size_t>(1)); // truncated
    try {
        read_log("select 1\nselect \xfe");
        FAIL();
    } catch (const LogError& e) {
        EXPECT_NE(std::string(e.what()).find("offset 16"), std::string::npos) << e.what();
    }
}

TEST(Train, Sec5Bundle) {
    const auto b = testkit::sec5_bundle();
    EXPECT_EQ(b.repository.size(), 4u);
    EXPECT_EQ(b.rules.rules().size(), 4u);
    EXPECT_EQ(b.manifest.records, 4u);
    EXPECT_EQ(b.manifest.usable, 4u);
    EXPECT_TRUE(b.manifest.skipped.empty());
    EXPECT_EQ(b.keywords, KeywordSet::defaults());
}

TEST(Train, DirtyLinesAreSkippedAndReported) {
    const std::string log = "select a from t where x=1\n"
                            "select * from t where x=1'\n"
                            "delete from t\n"
                            "select a from t; select b from u\n"
                            "select a from t where 1=1\n";
    const auto b = train(read_log(log), {});
    EXPECT_EQ(b.repository.size(), 1u);
    ASSERT_EQ(b.manifest.skipped.size(), 4u);
    EXPECT_EQ(b.manifest.skipped[0].reason, "residual_tokens");
    EXPECT_EQ(b.manifest.skipped[0].line_number, 2u);
    EXPECT_NE(b.manifest.skipped[0].detail.find("'"), std::string::npos);
    EXPECT_EQ(b.manifest.skipped[1].reason, "non_select");
    EXPECT_EQ(b.manifest.skipped[2].reason, "multiple_statements");
    EXPECT_EQ(b.manifest.skipped[3].reason, "literal_lhs");
    EXPECT_EQ(b.manifest.usable + b.manifest.skipped.size(), b.manifest.records);
}

TEST(Train, NothingUsable) {
    EXPECT_THROW(train({}, {}), TrainingError);
    EXPECT_THROW(train(read_log("drop table t\n"), {}), TrainingError);
}

TEST(Train, Deterministic) {
    const auto a = testkit::sec5_bundle();
    const auto b = testkit::sec5_bundle();
    EXPECT_EQ(repository_to_xml(a.repository), repository_to_xml(b.repository));
    EXPECT_EQ(save_profile(a.rules), save_profile(b.rules));
}

TEST(Bundle, SaveLoadRoundTrip) {
    testkit::TempDir dir;
    auto b = train(read_log("select a from t where x=1\nselect * from t where x=1'\tz\n", "app.log"), {});
    save_bundle(b, dir.path());
    for (const char* f : {kRepositoryFile, kRulesFile, kKeywordsFile, kManifestFile}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    const auto loaded = load_bundle(dir.path());
    EXPECT_TRUE(same_bundle(b, loaded));
    EXPECT_EQ(loaded.manifest.skipped, b.manifest.skipped);
    EXPECT_EQ(loaded.manifest.sources, std::vector<std::string>{"app.log"});
}

TEST(Bundle, LoadedBundleBehavesTheSame) {
    testkit::TempDir dir;
    const auto b = testkit::sec5_bundle();
    save_bundle(b, dir.path());
    const auto loaded = load_bundle(dir.path());
    testkit::Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        const auto q = i % 2 ? testkit::random_sqlish(rng, 20)
                             : testkit::substitute_placeholders(testkit::sec5_training_queries()[i % 4], rng);
        ASSERT_EQ(format_verdict_line(detect(q, b), q), format_verdict_line(detect(q, loaded), q));
    }
}

TEST(Bundle, MissingFileIsNamed) {
    testkit::TempDir dir;
    save_bundle(testkit::sec5_bundle(), dir.path());
    std::filesystem::remove(dir / kRulesFile);
    try {
        load_bundle(dir.path());
        FAIL();
    } catch (const BundleError& e) {
        EXPECT_NE(std::string(e.what()).find("rules.profile"), std::string::npos);
    }
    // Manifest is optional.
    testkit::TempDir dir2;
    save_bundle(testkit::sec5_bundle(), dir2.path());
    std::filesystem::remove(dir2 / kManifestFile);
    EXPECT_NO_THROW(load_bundle(dir2.path()));
}

TEST(Bundle, CorruptFilesAreNamed) {
    testkit::TempDir dir;
    save_bundle(testkit::sec5_bundle(), dir.path());
    dir.write(kRepositoryFile, "<AllQueries><Query>");
    try {
        load_bundle(dir.path());
        FAIL();
    } catch (const BundleError& e) {
        EXPECT_NE(std::string(e.what()).find("queries.xml"), std::string::npos);
    }
}

TEST(Bundle, TransactionCountMismatchIsIntegrityError) {
    testkit::TempDir dir;
    save_bundle(testkit::sec5_bundle(), dir.path());
    auto rules = slurp(dir / kRulesFile);
    rules.replace(rules.find("transactions=4"), 14, "transactions=5");
    dir.write(kRulesFile, rules);
    EXPECT_THROW(load_bundle(dir.path()), IntegrityError);
}

TEST(Manifest, Format) {
    const auto text = format_manifest(testkit::sec5_bundle());
    EXPECT_NE(text.find("records: 4\n"), std::string::npos);
    EXPECT_NE(text.find("rules: 4\n"), std::string::npos);
    EXPECT_NE(text.find("skipped: 0\n"), std::string::npos);
    EXPECT_NE(text.find("skipped_lines:\n"), std::string::npos);
}
