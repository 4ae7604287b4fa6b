// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero when any fails.

#include "ssf/cli.hpp"
#include "ssf/detector.hpp"
#include "ssf/evaluation.hpp"
#include "ssf/repository_xml.hpp"
#include "ssf/trainer.hpp"

#include "generators.hpp"
#include "temp_dir.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

using namespace ssf;

namespace {

using Clock = std::chrono::steady_clock;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kSample = SSF_SAMPLE_DIR;

ProfileBundle train_sample() { return train(read_log_file(kSample + "/train.log"), {}); }

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Each check returns an empty string on success, otherwise what went wrong.
std::string ac1_worked_example() {
    const auto t0 = Clock::now();
    const auto bundle = train_sample();
    const auto a = detect("Select username, password from Admin where id=1 or 1=1--", bundle);
    const auto b = detect("Select username, password from admin where id=5'", bundle);
    const double elapsed = seconds_since(t0);
    if (!a.is_intrusion() || a.phase != Phase::anomaly) return "tautology: " + format_verdict_line(a, "");
    const auto* missing = std::get_if<MissingRelation>(&a.reason);
    if (!missing || missing->relation != Relation{"admin", "1"}) return "tautology reason: " + a.reason_text();
    if (!b.is_intrusion() || b.phase != Phase::misuse) return "quote: " + format_verdict_line(b, "");
    if (elapsed >= 1.0) return "took " + std::to_string(elapsed) + " s";
    return {};
}

std::string ac2_training_closure() {
    const auto bundle = train_sample();
    testkit::Rng rng(20240601);
    for (const auto& rec : read_log_file(kSample + "/train.log")) {
        for (int i = 0; i < 100; ++i) {
            const auto sql = testkit::substitute_placeholders(rec.sql, rng);
            const auto v = detect(sql, bundle);
            if (v.is_intrusion()) return format_verdict_line(v, sql);
        }
    }
    return {};
}

std::string ac3_mining_oracle() {
    const auto t0 = Clock::now();
    testkit::Rng rng(1337);
    for (int round = 0; round < 200; ++round) {
        auto repo = testkit::random_repository(rng, 10);
        if (repo.empty()) repo.add(testkit::random_fingerprint(rng));
        MiningParams p;
        p.min_support = static_cast<double>(testkit::pick(rng, 6)) / 10.0;
        p.min_confidence = static_cast<double>(testkit::pick(rng, 6)) / 10.0;
        const auto diff =
            testkit::compare_with_oracle(mine_rules(repo, p), testkit::brute_force_rules(repo, p.min_support,
                                                                                         p.min_confidence));
        if (!diff.empty()) return "round " + std::to_string(round) + ": " + diff;
    }
    const double elapsed = seconds_since(t0);
    if (elapsed >= 10.0) return "took " + std::to_string(elapsed) + " s";
    return {};
}

std::string percent_encode(std::string_view s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) out += std::string{'%', hex[c >> 4], hex[c & 15]};
    return out;
}

std::string hex_encode(std::string_view s) {
    static const char* hex = "0123456789abcdef";
    std::string out = "0x";
    for (unsigned char c : s) out += std::string{hex[c >> 4], hex[c & 15]};
    return out;
}

std::string ac4_keyword_encodings() {
    const auto bundle = train_sample();
    for (const auto& kw : bundle.keywords.entries()) {
        const std::pair<std::string, bool> forms[] = {{kw, false}, {percent_encode(kw), true}, {hex_encode(kw), true}};
        for (const auto& [form, encoded] : forms) {
            const std::string sql = "Select username, password from admin where id=1 " + form + " 2";
            const auto hits = keyword_scan(sql, bundle.keywords);
            const bool seen = std::any_of(hits.begin(), hits.end(), [&](const KeywordHit& h) {
                return h.keyword == kw && h.encoded == encoded;
            });
            if (!seen) return "keyword '" + kw + "' not found in " + sql;
            const auto v = detect(sql, bundle);
            if (!v.is_intrusion()) return format_verdict_line(v, sql);
        }
    }
    return {};
}

std::string ac5_verbatim_training_query() {
    const auto bundle = train_sample();
    const auto records = read_log_file(kSample + "/train.log");
    const auto v = detect(records.at(2).sql, bundle);
    return v.is_intrusion() ? format_verdict_line(v, records[2].sql) : std::string();
}

std::string ac6_xml_golden_and_round_trip() {
    const auto xml = repository_to_xml(train_sample().repository);
    if (xml != slurp(std::string(SSF_TEST_DATA_DIR) + "/golden/sec5_queries.xml")) return "golden mismatch:\n" + xml;
    testkit::Rng rng(606);
    for (int i = 0; i < 500; ++i) {
        const auto repo = testkit::random_repository(rng, 8);
        if (!(repository_from_xml(repository_to_xml(repo)) == repo)) {
            return "round trip failed:\n" + repository_to_xml(repo);
        }
    }
    return {};
}

std::string ac7_fuzz_totality() {
    const auto bundle = train_sample();
    testkit::Rng rng(7777);
    for (int i = 0; i < 10000; ++i) {
        const std::string src = i % 2 ? testkit::random_bytes(rng, 120) : testkit::random_sqlish(rng, 40);
        try {
            const auto toks = tokenize(src);
            (void)parse_select(toks);
            const auto v = detect(src, bundle);
            const bool benign_ok = v.outcome == Outcome::benign && v.phase == Phase::none &&
                                   std::holds_alternative<std::monostate>(v.reason);
            const bool intrusion_ok = v.outcome == Outcome::intrusion && v.phase != Phase::none &&
                                      !std::holds_alternative<std::monostate>(v.reason);
            const auto line = format_verdict_line(v, src);
            if ((!benign_ok && !intrusion_ok) || std::count(line.begin(), line.end(), '\t') != 3 ||
                line.find('\n') != std::string::npos) {
                return "malformed verdict for input " + std::to_string(i);
            }
        } catch (const std::exception& e) {
            return "input " + std::to_string(i) + " threw: " + e.what();
        }
    }
    return {};
}

std::string ac8_reconnaissance() {
    const auto bundle = load_bundle(kSample + "/profile");
    const auto recon = read_corpus(slurp(kSample + "/recon.tsv"));
    if (recon.size() < 5) return "recon corpus too small";
    for (const auto& q : recon) {
        if (!q.attack) return "recon line " + std::to_string(q.line_number) + " not labelled attack";
        const auto v = detect(q.sql, bundle);
        if (!v.is_intrusion()) return format_verdict_line(v, q.sql);
    }
    std::istringstream in;
    std::ostringstream out, err;
    const int code = run_cli({"evaluate", "--profile", kSample + "/profile", "--corpus", kSample + "/recon.tsv",
                              "--format", "tsv"},
                             in, out, err);
    if (code != 0) return "evaluate exit " + std::to_string(code) + ": " + err.str();
    if (out.str().find("\nfn\t0\n") == std::string::npos) return "evaluate reported:\n" + out.str();
    return {};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<std::string()>> checks[] = {
        {"AC1 worked example: tautology is anomaly (admin->1), trailing quote is misuse, < 1 s", ac1_worked_example},
        {"AC2 training closure: 100 literal substitutions per training query are benign", ac2_training_closure},
        {"AC3 mine_rules equals brute-force pair counting on 200 random repositories, < 10 s", ac3_mining_oracle},
        {"AC4 every default keyword detected plain, percent-encoded and 0x-hex", ac4_keyword_encodings},
        {"AC5 training query 3 resubmitted verbatim is benign", ac5_verbatim_training_query},
        {"AC6 repository XML matches golden file; 500 random round trips", ac6_xml_golden_and_round_trip},
        {"AC7 10000 random inputs: no crash, well-formed verdicts", ac7_fuzz_totality},
        {"AC8 reconnaissance probes all intrusions against the sample profile; FN = 0", ac8_reconnaissance},
    };
    int failed = 0;
    for (const auto& [name, check] : checks) {
        std::string problem;
        try {
            problem = check();
        } catch (const std::exception& e) {
            problem = std::string("exception: ") + e.what();
        }
        if (problem.empty()) {
            std::cout << "[PASS] " << name << "\n";
        } else {
            ++failed;
            std::cout << "[FAIL] " << name << "\n       " << problem << "\n";
        }
    }
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " failed" : std::string("acceptance: all passed"))
              << std::endl;
    return failed ? 1 : 0;
}
