#include "ssf/detector.hpp"
#include "ssf/parallel.hpp"

#include "generators.hpp"
#include "sec5_fixture.hpp"

#include <gtest/gtest.h>

using namespace ssf;

TEST(Parallel, SupportCountingMatchesSerial) {
    testkit::Rng rng(4);
    for (int round = 0; round < 50; ++round) {
        std::vector<ItemSet> txs(testkit::pick(rng, 300));
        for (auto& tx : txs) {
            for (int item = 0; item < 20; ++item) {
                if (testkit::coin(rng, 0.3)) tx.push_back(item);
            }
        }
        std::vector<ItemSet> cands(testkit::pick(rng, 200));
        for (auto& c : cands) {
            for (int item = 0; item < 20; ++item) {
                if (testkit::coin(rng, 0.1)) c.push_back(item);
            }
        }
        const auto serial = count_support_serial(txs, cands);
        ASSERT_EQ(count_support_parallel(txs, cands), serial);
        ASSERT_EQ(count_support_parallel(txs, cands, 3), serial);
    }
}

TEST(Parallel, SupportCountingByHand) {
    const std::vector<ItemSet> txs{{1, 2, 3}, {1, 3}, {2}};
    EXPECT_EQ(count_support_serial(txs, {{1}, {1, 3}, {2, 3}, {4}, {}}),
              (std::vector<std::size_t>{2, 2, 1, 0, 3}));
}

TEST(Parallel, BatchDetectionMatchesSerialInOrder) {
    const auto bundle = testkit::sec5_bundle();
    testkit::Rng rng(12);
    std::vector<std::string> queries;
    for (int i = 0; i < 500; ++i) {
        if (i % 3 == 0) queries.push_back(testkit::random_sqlish(rng, 20));
        else queries.push_back(testkit::substitute_placeholders(testkit::sec5_training_queries()[i % 4], rng));
    }
    queries.push_back("Select username, password from Admin where id=1 or 1=1--");
    const auto serial = detect_batch_serial(queries, bundle);
    const auto parallel = detect_batch_parallel(queries, bundle, {}, 4);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        ASSERT_EQ(format_verdict_line(serial[i], queries[i]), format_verdict_line(parallel[i], queries[i]));
    }
}
