#pragma once

#include "ssf/fingerprint.hpp"
#include "ssf/keywords.hpp"
#include "ssf/rule_miner.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ssf {

struct SkippedRecord {
    std::size_t line_number = 0;
    std::string reason; // non_select | residual_tokens | multiple_statements | literal_lhs
    std::string detail;
    std::string sql;

    bool operator==(const SkippedRecord&) const = default;
};

/// Training metadata written to manifest.txt.
struct TrainingManifest {
    std::string created;        // ISO-8601 UTC; not part of bundle equality
    std::size_t records = 0;
    std::size_t usable = 0;
    std::vector<std::string> sources;
    std::vector<SkippedRecord> skipped;
};

/// Everything the detector needs: the fingerprint repository, the mined rule
/// profile and the keyword set. Immutable once built or loaded.
struct ProfileBundle {
    FingerprintRepository repository;
    RuleProfile rules;
    KeywordSet keywords = KeywordSet::defaults();
    TrainingManifest manifest;
};

} // namespace ssf
