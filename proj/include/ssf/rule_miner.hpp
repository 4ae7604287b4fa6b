#pragma once

#include "ssf/fingerprint.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ssf {

/// One (table -> selection attribute) pair. The attribute is a lowercase
/// identifier, or the raw text of a literal when a literal stands in the
/// selection position (`1=1`).
struct Relation {
    std::string table;
    std::string attribute;

    auto operator<=>(const Relation&) const = default;
    bool operator==(const Relation&) const = default;
};

std::string to_string(const Relation& rel); // "admin->id"

class MiningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProfileLoadError : public std::runtime_error {
public:
    ProfileLoadError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct MiningParams {
    double min_support = 0.0;
    double min_confidence = 0.0;
    /// Largest itemset size explored by Apriori. Rules only need pairs.
    std::size_t max_itemset_size = 2;

    void validate() const; // throws MiningError
};

struct AssociationRule {
    std::string antecedent; // table
    std::string consequent; // attribute
    double support = 0.0;
    double confidence = 0.0;
    std::size_t joint_count = 0;      // transactions containing both
    std::size_t antecedent_count = 0; // transactions containing the table
};

/// Item encoding used for transactions: "table:<name>" / "attr:<name>".
inline constexpr std::string_view kTablePrefix = "table:";
inline constexpr std::string_view kAttributePrefix = "attr:";

/// Sorted, duplicate-free item set.
using Transaction = std::vector<std::string>;

/// One transaction per fingerprint: its FROM tables plus every attribute
/// operand of its terms and every non-positional ORDER BY column, including
/// those of UNION members. Literal operands contribute nothing.
std::vector<Transaction> transactions_from(const FingerprintRepository& repo);

struct FrequentItemset {
    std::vector<std::string> items; // sorted
    std::size_t count = 0;
};

/// Level-wise Apriori: candidate generation by prefix join, subset pruning,
/// and support counting. An itemset is frequent when it occurs at least once
/// and its support reaches `min_support`.
std::vector<FrequentItemset> apriori(const std::vector<Transaction>& transactions,
                                     double min_support, std::size_t max_size,
                                     bool parallel = true);

/// The normal-behaviour profile: table -> attribute rules.
class RuleProfile {
public:
    RuleProfile() = default;
    RuleProfile(std::vector<AssociationRule> rules, MiningParams params,
                std::size_t transaction_count);

    /// Sorted by (antecedent, consequent).
    const std::vector<AssociationRule>& rules() const { return rules_; }
    const MiningParams& params() const { return params_; }
    std::size_t transaction_count() const { return transaction_count_; }

    bool contains(const Relation& rel) const;
    const AssociationRule* find(const Relation& rel) const;

private:
    std::vector<AssociationRule> rules_;
    MiningParams params_;
    std::size_t transaction_count_ = 0;
    std::set<std::pair<std::string, std::string>, std::less<>> keys_;
};

/// Same rule set, same counts, rates and thresholds equal to within the
/// six-decimal precision of the profile file.
bool equivalent(const RuleProfile& a, const RuleProfile& b);

/// Throws MiningError for an empty repository or invalid parameters.
RuleProfile mine_rules(const FingerprintRepository& repo, const MiningParams& params,
                       bool parallel = true);

bool profile_contains(const RuleProfile& profile, const Relation& rel);

std::string save_profile(const RuleProfile& profile);
RuleProfile load_profile(std::string_view text);

} // namespace ssf
