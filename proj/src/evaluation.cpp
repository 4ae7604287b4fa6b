#include "ssf/evaluation.hpp"

#include <cstdio>

namespace ssf {

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

std::vector<LabeledQuery> read_corpus(std::string_view text) {
    std::vector<LabeledQuery> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos || line.front() == '#') continue;

        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw CorpusError(line_no, "expected '<label>\\t<sql>'");
        const std::string label = to_lower(line.substr(0, tab));
        LabeledQuery q{line_no, false, std::string(line.substr(tab + 1))};
        if (label == "attack") q.attack = true;
        else if (label != "benign") throw CorpusError(line_no, "unknown label '" + label + "'");
        out.push_back(std::move(q));
    }
    return out;
}

double EvalReport::precision() const { return ratio(tp, tp + fp); }
double EvalReport::recall() const { return ratio(tp, tp + fn); }
double EvalReport::false_positive_rate() const { return ratio(fp, fp + tn); }

EvalReport evaluate(const std::vector<LabeledQuery>& corpus, const ProfileBundle& bundle,
                    const DetectOptions& options, int jobs) {
    std::vector<std::string> sql;
    sql.reserve(corpus.size());
    for (const auto& q : corpus) sql.push_back(q.sql);
    const auto verdicts = jobs == 1 ? detect_batch_serial(sql, bundle, options)
                                    : detect_batch_parallel(sql, bundle, options, jobs);
    EvalReport r;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const bool flagged = verdicts[i].is_intrusion();
        if (flagged) ++r.per_phase[to_string(verdicts[i].phase)];
        if (corpus[i].attack) {
            if (flagged) ++r.tp;
            else {
                ++r.fn;
                r.false_negative_lines.push_back(corpus[i].line_number);
            }
        } else if (flagged) {
            ++r.fp;
            r.false_positive_lines.push_back(corpus[i].line_number);
        } else {
            ++r.tn;
        }
    }
    return r;
}

std::string format_report_tsv(const EvalReport& r) {
    char rates[160];
    std::snprintf(rates, sizeof rates, "precision\t%.6f\nrecall\t%.6f\nfpr\t%.6f\n", r.precision(), r.recall(),
                  r.false_positive_rate());
    std::string out;
    out += "total\t" + std::to_string(r.total()) + "\n";
    out += "tp\t" + std::to_string(r.tp) + "\n";
    out += "fp\t" + std::to_string(r.fp) + "\n";
    out += "tn\t" + std::to_string(r.tn) + "\n";
    out += "fn\t" + std::to_string(r.fn) + "\n";
    out += rates;
    for (const auto& [phase, n] : r.per_phase) out += "phase." + phase + "\t" + std::to_string(n) + "\n";
    for (auto l : r.false_negative_lines) out += "false_negative_line\t" + std::to_string(l) + "\n";
    for (auto l : r.false_positive_lines) out += "false_positive_line\t" + std::to_string(l) + "\n";
    return out;
}

} // namespace ssf
