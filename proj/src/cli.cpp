#include "ssf/cli.hpp"

#include "ssf/evaluation.hpp"
#include "ssf/repository_xml.hpp"
#include "ssf/trainer.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace ssf {

namespace {

std::string slurp(const std::string& path, std::istream& in) {
    if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error(path + ": cannot open");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::string> query_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream s(text);
    std::string line;
    while (std::getline(s, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(line);
    }
    return out;
}

std::string join_relations(const std::vector<Relation>& rels) {
    std::string out;
    for (const auto& r : rels) out += (out.empty() ? "" : ", ") + to_string(r);
    return out.empty() ? "-" : out;
}

void print_pretty(std::ostream& out, const Verdict& v, const std::string& sql) {
    out << "query:     " << sql << "\n"
        << "verdict:   " << to_string(v.outcome) << "\n"
        << "phase:     " << to_string(v.phase) << "\n"
        << "reason:    " << v.reason_text() << "\n"
        << "relations: " << join_relations(v.relations_checked) << "\n"
        << "hits:      ";
    if (v.hits.empty()) out << "-";
    for (std::size_t i = 0; i < v.hits.size(); ++i) {
        out << (i ? ", " : "") << '"' << v.hits[i].keyword << "\"@" << v.hits[i].offset
            << (v.hits[i].encoded ? " (encoded)" : "");
    }
    out << "\n\n";
}

struct Options {
    // train
    std::vector<std::string> logs;
    std::string out_dir;
    double min_support = 0.0;
    double min_confidence = 0.0;
    std::string keyword_file;
    // detect / scan / evaluate
    std::string profile;
    std::vector<std::string> queries;
    bool from_stdin = false;
    bool pretty = false;
    bool allow_non_select = false;
    int jobs = 1;
    std::string input;
    std::string corpus;
    std::string format = "text";
};

int do_train(const Options& o, std::ostream& out) {
    std::vector<LogRecord> records;
    for (const auto& path : o.logs) {
        auto part = read_log_file(path);
        records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    MiningParams params;
    params.min_support = o.min_support;
    params.min_confidence = o.min_confidence;
    KeywordSet keywords = KeywordSet::defaults();
    if (!o.keyword_file.empty()) {
        std::istringstream none;
        keywords = parse_keyword_file(slurp(o.keyword_file, none));
    }
    const ProfileBundle bundle = train(records, params, keywords);
    save_bundle(bundle, o.out_dir);
    out << "trained: " << bundle.repository.size() << " queries, " << bundle.rules.rules().size() << " rules, "
        << bundle.manifest.skipped.size() << " skipped\n";
    return kExitOk;
}

DetectOptions detect_options(const Options& o) {
    DetectOptions d;
    if (o.allow_non_select) d.non_select = NonSelectPolicy::benign;
    return d;
}

std::vector<Verdict> run_batch(const std::vector<std::string>& queries, const ProfileBundle& bundle,
                               const Options& o) {
    return o.jobs == 1 ? detect_batch_serial(queries, bundle, detect_options(o))
                       : detect_batch_parallel(queries, bundle, detect_options(o), o.jobs);
}

int do_detect(const Options& o, std::istream& in, std::ostream& out) {
    const ProfileBundle bundle = load_bundle(o.profile);
    std::vector<std::string> queries = o.queries;
    if (o.from_stdin) {
        auto more = query_lines(slurp("-", in));
        queries.insert(queries.end(), more.begin(), more.end());
    }
    const auto verdicts = run_batch(queries, bundle, o);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (o.pretty) print_pretty(out, verdicts[i], queries[i]);
        else out << format_verdict_line(verdicts[i], queries[i]) << "\n";
    }
    const bool any = std::any_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.is_intrusion(); });
    return any ? kExitIntrusion : kExitOk;
}

int do_scan(const Options& o, std::istream& in, std::ostream& out) {
    const ProfileBundle bundle = load_bundle(o.profile);
    std::vector<std::string> queries;
    for (auto& rec : read_log(slurp(o.input, in), o.input)) queries.push_back(std::move(rec.sql));
    const auto verdicts = run_batch(queries, bundle, o);
    std::size_t intrusions = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (verdicts[i].is_intrusion()) ++intrusions;
        out << format_verdict_line(verdicts[i], queries[i]) << "\n";
    }
    out << "summary: " << verdicts.size() - intrusions << " benign, " << intrusions << " intrusion\n";
    return intrusions ? kExitIntrusion : kExitOk;
}

int do_evaluate(const Options& o, std::istream& in, std::ostream& out) {
    const ProfileBundle bundle = load_bundle(o.profile);
    const auto corpus = read_corpus(slurp(o.corpus, in));
    const EvalReport report = evaluate(corpus, bundle, detect_options(o), o.jobs);
    if (o.format == "tsv") {
        out << format_report_tsv(report);
    } else {
        char buf[64];
        auto row = [&](const char* label, const std::string& value) {
            std::snprintf(buf, sizeof buf, "%-16s %10s\n", label, value.c_str());
            out << buf;
        };
        auto rate = [](double r) {
            char b[32];
            std::snprintf(b, sizeof b, "%.4f", r);
            return std::string(b);
        };
        row("queries", std::to_string(report.total()));
        row("true positive", std::to_string(report.tp));
        row("false positive", std::to_string(report.fp));
        row("true negative", std::to_string(report.tn));
        row("false negative", std::to_string(report.fn));
        row("precision", rate(report.precision()));
        row("recall", rate(report.recall()));
        row("fp rate", rate(report.false_positive_rate()));
        for (const auto& [phase, n] : report.per_phase) row(("phase " + phase).c_str(), std::to_string(n));
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"SQL injection detection from query fingerprints and mined access rules", "ssf"};
    app.require_subcommand(1, 1);

    auto* train_cmd = app.add_subcommand("train", "Build a profile bundle from query logs");
    train_cmd->add_option("--log", o.logs, "Training log (repeatable)")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--out", o.out_dir, "Output bundle directory")->required();
    train_cmd->add_option("--min-support", o.min_support, "Minimum rule support")->check(CLI::Range(0.0, 1.0));
    train_cmd->add_option("--min-confidence", o.min_confidence, "Minimum rule confidence")
        ->check(CLI::Range(0.0, 1.0));
    train_cmd->add_option("--keywords", o.keyword_file, "Keyword file")->check(CLI::ExistingFile);

    auto add_profile = [&](CLI::App* cmd) {
        cmd->add_option("--profile", o.profile, "Profile bundle directory")->envname("SSF_PROFILE")->required();
        cmd->add_flag("--allow-non-select", o.allow_non_select, "Treat keyword-free non-SELECT statements as benign");
        cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    };

    auto* detect_cmd = app.add_subcommand("detect", "Classify queries");
    add_profile(detect_cmd);
    auto* q = detect_cmd->add_option("--query", o.queries, "Query text (repeatable)");
    auto* s = detect_cmd->add_flag("--stdin", o.from_stdin, "Read one query per line from stdin");
    q->excludes(s);
    detect_cmd->add_flag("--pretty", o.pretty, "Multi-line output");

    auto* scan_cmd = app.add_subcommand("scan", "Classify every line of a file");
    add_profile(scan_cmd);
    scan_cmd->add_option("--input", o.input, "Query file, '-' for stdin")->required();

    auto* eval_cmd = app.add_subcommand("evaluate", "Score a labelled corpus");
    add_profile(eval_cmd);
    eval_cmd->add_option("--corpus", o.corpus, "label<TAB>sql file")->required();
    eval_cmd->add_option("--format", o.format, "tsv or text")->check(CLI::IsMember({"tsv", "text"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (detect_cmd->parsed() && o.queries.empty() && !o.from_stdin) {
            throw CLI::RequiredError("--query or --stdin");
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (train_cmd->parsed()) return do_train(o, out);
        if (detect_cmd->parsed()) return do_detect(o, in, out);
        if (scan_cmd->parsed()) return do_scan(o, in, out);
        return do_evaluate(o, in, out);
    } catch (const std::exception& e) {
        err << "ssf: " << e.what() << "\n";
        return kExitError;
    }
}

} // namespace ssf
