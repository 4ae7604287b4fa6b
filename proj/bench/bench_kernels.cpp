// Serial reference vs OpenMP kernels: support counting and batch detection.

#include "ssf/detector.hpp"
#include "ssf/parallel.hpp"
#include "ssf/trainer.hpp"

#include "generators.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ssf;

struct SupportInput {
    std::vector<ItemSet> transactions;
    std::vector<ItemSet> candidates;
};

SupportInput make_support_input(std::size_t n_tx) {
    testkit::Rng rng(42);
    SupportInput in;
    in.transactions.resize(n_tx);
    for (auto& tx : in.transactions) {
        for (int item = 0; item < 64; ++item) {
            if (testkit::coin(rng, 0.2)) tx.push_back(item);
        }
    }
    for (int a = 0; a < 64; ++a) {
        for (int b = a + 1; b < 64; ++b) in.candidates.push_back({a, b});
    }
    return in;
}

void BM_SupportSerial(benchmark::State& state) {
    const auto in = make_support_input(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(count_support_serial(in.transactions, in.candidates));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(in.candidates.size()));
}

void BM_SupportParallel(benchmark::State& state) {
    const auto in = make_support_input(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(count_support_parallel(in.transactions, in.candidates));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(in.candidates.size()));
}

const ProfileBundle& bench_bundle() {
    static const ProfileBundle b = train(read_log("Select username, password from admin where id=?\n"
                                                  "Select username, password from admin where id<?\n"
                                                  "Select * from admin where username=? order by username\n"
                                                  "Select username, product from admin where salary<? and IsActive=?\n"),
                                         {});
    return b;
}

std::vector<std::string> make_queries(std::size_t n) {
    testkit::Rng rng(7);
    static const std::string templates[] = {
        "Select username, password from admin where id=?",
        "Select * from admin where username=? order by username",
        "Select username, password from Admin where id=? or 1=1--",
        "Select username, password from admin where id=-10 Union Select 1, 2, version(), 4, 5--",
    };
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(testkit::substitute_placeholders(templates[i % 4], rng));
    return out;
}

void BM_DetectSerial(benchmark::State& state) {
    const auto queries = make_queries(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(detect_batch_serial(queries, bench_bundle()));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DetectParallel(benchmark::State& state) {
    const auto queries = make_queries(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(detect_batch_parallel(queries, bench_bundle()));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_SupportSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_SupportParallel)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(BM_DetectSerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_DetectParallel)->Arg(1000)->Arg(10000)->UseRealTime();

BENCHMARK_MAIN();
