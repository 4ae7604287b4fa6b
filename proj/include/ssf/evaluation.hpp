#pragma once

#include "ssf/detector.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssf {

class CorpusError : public std::runtime_error {
public:
    CorpusError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct LabeledQuery {
    std::size_t line_number = 0;
    bool attack = false;
    std::string sql;
};

/// `benign\t<sql>` or `attack\t<sql>` per line; blank and `#` lines ignored.
std::vector<LabeledQuery> read_corpus(std::string_view text);

struct EvalReport {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::map<std::string, std::size_t> per_phase; // intrusions by phase
    std::vector<std::size_t> false_negative_lines;
    std::vector<std::size_t> false_positive_lines;

    std::size_t total() const { return tp + fp + tn + fn; }
    // 0 when the denominator is 0.
    double precision() const;
    double recall() const;
    double false_positive_rate() const;
};

EvalReport evaluate(const std::vector<LabeledQuery>& corpus, const ProfileBundle& bundle,
                    const DetectOptions& options = {}, int jobs = 1);

/// key<TAB>value lines.
std::string format_report_tsv(const EvalReport& report);

} // namespace ssf
