#pragma once

#include "ssf/bundle.hpp"
#include "ssf/sql_parser.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ssf {

enum class Outcome { benign, intrusion };
enum class Phase { none, anomaly, misuse };

const char* to_string(Outcome outcome);
const char* to_string(Phase phase);

struct MissingRelation {
    Relation relation;
};
struct StructureMismatch {
    std::vector<KeywordHit> hits;
    RepositoryKey key;
};
struct NoStoredQueryForKey {
    RepositoryKey key;
};

using Reason = std::variant<std::monostate, MissingRelation, StructureMismatch, NoStoredQueryForKey>;

struct Verdict {
    Outcome outcome = Outcome::benign;
    Phase phase = Phase::none;
    Reason reason;
    std::vector<Relation> relations_checked;
    std::vector<KeywordHit> hits;

    bool is_intrusion() const { return outcome == Outcome::intrusion; }
    /// `-` for benign verdicts, otherwise e.g. "missing_relation admin->1".
    std::string reason_text() const;
};

/// What to do with statements that are not SELECTs and carry no keyword.
enum class NonSelectPolicy { intrusion, benign };

struct DetectOptions {
    NonSelectPolicy non_select = NonSelectPolicy::intrusion;
};

/// (table, selection) pairs of a parsed query: for every FROM table, the LHS
/// of each term (attribute name, or literal text for `1=1`-style terms), the
/// RHS when it is an attribute, and every non-positional ORDER BY column.
/// UNION members contribute their own pairs. First occurrence order, no
/// duplicates.
std::vector<Relation> extract_relations(const ParsedQuery& parsed);

/// True (intrusion) unless every relation is in the profile.
bool anomaly_check(std::span<const Relation> relations, const RuleProfile& profile);

/// True (intrusion) unless a stored fingerprint with the same repository key
/// is structurally equal to `fp`. Callers only invoke it when `hits` is
/// non-empty.
bool misuse_check(const QueryFingerprint& fp, std::span<const KeywordHit> hits,
                  const FingerprintRepository& repo);

/// Two-phase pipeline: anomaly check against the rule profile, then (only
/// when it passes) keyword scan and structural comparison.
Verdict detect(std::string_view source, const ProfileBundle& bundle, const DetectOptions& options = {});

/// Batch detection. Output order always matches input order.
std::vector<Verdict> detect_batch_serial(std::span<const std::string> queries, const ProfileBundle& bundle,
                                         const DetectOptions& options = {});
/// OpenMP version; `threads <= 0` uses the OpenMP default.
std::vector<Verdict> detect_batch_parallel(std::span<const std::string> queries, const ProfileBundle& bundle,
                                           const DetectOptions& options = {}, int threads = 0);

/// `<BENIGN|INTRUSION>\t<phase|->\t<reason|->\t<sql>` with tabs and line
/// breaks inside the SQL escaped.
std::string format_verdict_line(const Verdict& verdict, std::string_view sql);

} // namespace ssf
