#include "ssf/detector.hpp"

#include <algorithm>

#include <omp.h>

namespace ssf {

namespace {

void collect_relations(const ParsedQuery& q, std::vector<Relation>& out) {
    auto add = [&](const std::string& table, const std::string& attribute) {
        Relation rel{table, attribute};
        if (std::find(out.begin(), out.end(), rel) == out.end()) out.push_back(std::move(rel));
    };
    for (const auto& table : q.from_tables) {
        for (const auto& term : q.predicates) {
            add(table, term.lhs.name);
            if (term.rhs.is_attribute()) add(table, term.rhs.name);
        }
        for (const auto& col : q.order_by) {
            if (!is_positional(col)) add(table, col);
        }
    }
    for (const auto& set : q.set_operations) collect_relations(set.query, out);
}

std::string format_hits(const std::vector<KeywordHit>& hits) {
    std::string out;
    for (const auto& h : hits) {
        if (!out.empty()) out += ',';
        out += '"' + h.keyword + "\"@" + std::to_string(h.offset);
    }
    return out;
}

Verdict intrusion(Phase phase, Reason reason, std::vector<Relation> relations,
                  std::vector<KeywordHit> hits) {
    Verdict v;
    v.outcome = Outcome::intrusion;
    v.phase = phase;
    v.reason = std::move(reason);
    v.relations_checked = std::move(relations);
    v.hits = std::move(hits);
    return v;
}

} // namespace

const char* to_string(Outcome outcome) {
    return outcome == Outcome::intrusion ? "INTRUSION" : "BENIGN";
}

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::anomaly: return "anomaly";
        case Phase::misuse: return "misuse";
        case Phase::none: break;
    }
    return "-";
}

std::string Verdict::reason_text() const {
    struct Visitor {
        std::string operator()(std::monostate) const { return "-"; }
        std::string operator()(const MissingRelation& r) const {
            return "missing_relation " + to_string(r.relation);
        }
        std::string operator()(const StructureMismatch& r) const {
            return "structure_mismatch key=" + to_string(r.key) + " hits=" + format_hits(r.hits);
        }
        std::string operator()(const NoStoredQueryForKey& r) const {
            return "no_stored_query_for_key key=" + to_string(r.key);
        }
    };
    return std::visit(Visitor{}, reason);
}

std::vector<Relation> extract_relations(const ParsedQuery& parsed) {
    std::vector<Relation> out;
    collect_relations(parsed, out);
    return out;
}

bool anomaly_check(std::span<const Relation> relations, const RuleProfile& profile) {
    const auto score = std::count_if(relations.begin(), relations.end(),
                                     [&](const Relation& r) { return profile_contains(profile, r); });
    return static_cast<std::size_t>(score) != relations.size();
}

bool misuse_check(const QueryFingerprint& fp, std::span<const KeywordHit> /*hits*/,
                  const FingerprintRepository& repo) {
    const auto candidates = repo.lookup(repository_key(fp));
    return std::none_of(candidates.begin(), candidates.end(),
                        [&](const QueryFingerprint* stored) { return structural_equals(fp, *stored); });
}

Verdict detect(std::string_view source, const ProfileBundle& bundle, const DetectOptions& options) {
    const ParsedQuery parsed = parse_select(tokenize(source));

    if (parsed.command_type != CommandType::select) {
        auto hits = keyword_scan(source, bundle.keywords);
        if (!hits.empty()) {
            auto reason_hits = hits;
            return intrusion(Phase::misuse, StructureMismatch{std::move(reason_hits), {}}, {}, std::move(hits));
        }
        if (options.non_select == NonSelectPolicy::benign) return {};
        return intrusion(Phase::misuse, NoStoredQueryForKey{{}}, {}, {});
    }

    auto relations = extract_relations(parsed);
    for (const auto& rel : relations) {
        if (!profile_contains(bundle.rules, rel)) {
            return intrusion(Phase::anomaly, MissingRelation{rel}, std::move(relations), {});
        }
    }

    auto hits = keyword_scan(source, bundle.keywords);
    Verdict benign;
    benign.relations_checked = std::move(relations);
    if (hits.empty()) return benign;

    const QueryFingerprint fp = abstract_literals(parsed);
    if (!misuse_check(fp, hits, bundle.repository)) {
        benign.hits = std::move(hits);
        return benign;
    }
    auto key = repository_key(fp);
    Reason reason = bundle.repository.lookup(key).empty()
                        ? Reason{NoStoredQueryForKey{std::move(key)}}
                        : Reason{StructureMismatch{hits, std::move(key)}};
    return intrusion(Phase::misuse, std::move(reason), std::move(benign.relations_checked), std::move(hits));
}

std::vector<Verdict> detect_batch_serial(std::span<const std::string> queries, const ProfileBundle& bundle,
                                         const DetectOptions& options) {
    std::vector<Verdict> out;
    out.reserve(queries.size());
    for (const auto& q : queries) out.push_back(detect(q, bundle, options));
    return out;
}

// Each iteration writes only its own slot; the bundle is read-only.
std::vector<Verdict> detect_batch_parallel(std::span<const std::string> queries, const ProfileBundle& bundle,
                                           const DetectOptions& options, int threads) {
    std::vector<Verdict> out(queries.size());
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(team)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = detect(queries[static_cast<std::size_t>(i)], bundle, options);
    }
    return out;
}

std::string format_verdict_line(const Verdict& verdict, std::string_view sql) {
    std::string line = to_string(verdict.outcome);
    line += '\t';
    line += to_string(verdict.phase);
    line += '\t';
    line += verdict.reason_text();
    line += '\t';
    for (char c : sql) {
        switch (c) {
            case '\t': line += "\\t"; break;
            case '\n': line += "\\n"; break;
            case '\r': line += "\\r"; break;
            default: line += c;
        }
    }
    return line;
}

} // namespace ssf
