#include "ssf/rule_miner.hpp"
#include "ssf/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace ssf {

namespace {

void collect_items(const QueryFingerprint& fp, Transaction& items) {
    for (const auto& t : fp.from_tables) items.push_back(std::string(kTablePrefix) + t);
    for (const auto& term : fp.terms) {
        if (term.lhs.is_attribute()) items.push_back(std::string(kAttributePrefix) + term.lhs.name);
        if (term.rhs.is_attribute()) items.push_back(std::string(kAttributePrefix) + term.rhs.name);
    }
    for (const auto& col : fp.order_by) {
        if (!is_positional(col)) items.push_back(std::string(kAttributePrefix) + col);
    }
    for (const auto& set : fp.set_operations) collect_items(set.query, items);
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

// Frequent (k+1)-candidates from frequent k-itemsets sharing a (k-1)-prefix,
// dropping any candidate with an infrequent k-subset.
std::vector<ItemSet> generate_candidates(const std::vector<ItemSet>& frequent) {
    std::set<ItemSet> known(frequent.begin(), frequent.end());
    std::vector<ItemSet> out;
    for (std::size_t i = 0; i < frequent.size(); ++i) {
        for (std::size_t j = i + 1; j < frequent.size(); ++j) {
            const auto& a = frequent[i];
            const auto& b = frequent[j];
            if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) break;
            ItemSet cand = a;
            cand.push_back(b.back());
            bool all_subsets_frequent = true;
            for (std::size_t drop = 0; drop + 2 < cand.size() && all_subsets_frequent; ++drop) {
                ItemSet sub;
                for (std::size_t k = 0; k < cand.size(); ++k) {
                    if (k != drop) sub.push_back(cand[k]);
                }
                all_subsets_frequent = known.count(sub) > 0;
            }
            if (all_subsets_frequent) out.push_back(std::move(cand));
        }
    }
    return out;
}

std::string format_rate(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_rate(std::string_view text, double& out) {
    // from_chars for double is available in libstdc++ 11.
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end && out >= 0.0 && out <= 1.0;
}

} // namespace

std::string to_string(const Relation& rel) {
    return rel.table + "->" + rel.attribute;
}

ProfileLoadError::ProfileLoadError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void MiningParams::validate() const {
    if (!(min_support >= 0.0 && min_support <= 1.0)) {
        throw MiningError("min_support must lie in [0, 1]");
    }
    if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
        throw MiningError("min_confidence must lie in [0, 1]");
    }
    if (max_itemset_size < 2) throw MiningError("max_itemset_size must be at least 2");
}

std::vector<Transaction> transactions_from(const FingerprintRepository& repo) {
    std::vector<Transaction> out;
    out.reserve(repo.size());
    for (const auto& fp : repo.entries()) {
        Transaction items;
        collect_items(fp, items);
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        out.push_back(std::move(items));
    }
    return out;
}

std::vector<FrequentItemset> apriori(const std::vector<Transaction>& transactions,
                                     double min_support, std::size_t max_size, bool parallel) {
    // Dense integer ids in lexicographic item order keep every itemset sorted
    // both as ids and as strings.
    std::map<std::string, int> ids;
    for (const auto& tx : transactions) {
        for (const auto& item : tx) ids.emplace(item, 0);
    }
    std::vector<std::string> names;
    names.reserve(ids.size());
    for (auto& [name, id] : ids) {
        id = static_cast<int>(names.size());
        names.push_back(name);
    }
    std::vector<ItemSet> encoded;
    encoded.reserve(transactions.size());
    for (const auto& tx : transactions) {
        ItemSet set;
        for (const auto& item : tx) set.push_back(ids.at(item));
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        encoded.push_back(std::move(set));
    }

    const double n = static_cast<double>(transactions.size());
    auto is_frequent = [&](std::size_t count) {
        return count > 0 && static_cast<double>(count) / n >= min_support;
    };

    std::vector<FrequentItemset> result;
    std::vector<ItemSet> candidates;
    for (int id = 0; id < static_cast<int>(names.size()); ++id) candidates.push_back({id});

    for (std::size_t level = 1; level <= max_size && !candidates.empty(); ++level) {
        const auto counts = parallel ? count_support_parallel(encoded, candidates)
                                     : count_support_serial(encoded, candidates);
        std::vector<ItemSet> frequent;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (!is_frequent(counts[c])) continue;
            FrequentItemset fi;
            for (int id : candidates[c]) fi.items.push_back(names[static_cast<std::size_t>(id)]);
            fi.count = counts[c];
            result.push_back(std::move(fi));
            frequent.push_back(candidates[c]);
        }
        if (level < max_size) candidates = generate_candidates(frequent);
        else candidates.clear();
    }
    return result;
}

RuleProfile::RuleProfile(std::vector<AssociationRule> rules, MiningParams params,
                         std::size_t transaction_count)
    : rules_(std::move(rules)), params_(params), transaction_count_(transaction_count) {
    std::sort(rules_.begin(), rules_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.antecedent, a.consequent) < std::tie(b.antecedent, b.consequent);
    });
    for (const auto& r : rules_) {
        if (!keys_.emplace(r.antecedent, r.consequent).second) {
            throw MiningError("duplicate rule " + r.antecedent + " -> " + r.consequent);
        }
    }
}

const AssociationRule* RuleProfile::find(const Relation& rel) const {
    if (!keys_.count(std::pair(rel.table, rel.attribute))) return nullptr;
    auto it = std::lower_bound(rules_.begin(), rules_.end(), rel, [](const auto& r, const Relation& k) {
        return std::tie(r.antecedent, r.consequent) < std::tie(k.table, k.attribute);
    });
    return &*it;
}

bool RuleProfile::contains(const Relation& rel) const {
    return keys_.count(std::pair(rel.table, rel.attribute)) > 0;
}

bool equivalent(const RuleProfile& a, const RuleProfile& b) {
    constexpr double tol = 1e-6;
    if (a.transaction_count() != b.transaction_count() || a.rules().size() != b.rules().size() ||
        std::abs(a.params().min_support - b.params().min_support) > tol ||
        std::abs(a.params().min_confidence - b.params().min_confidence) > tol) {
        return false;
    }
    for (std::size_t i = 0; i < a.rules().size(); ++i) {
        const auto& x = a.rules()[i];
        const auto& y = b.rules()[i];
        if (x.antecedent != y.antecedent || x.consequent != y.consequent ||
            x.joint_count != y.joint_count || x.antecedent_count != y.antecedent_count ||
            std::abs(x.support - y.support) > tol || std::abs(x.confidence - y.confidence) > tol) {
            return false;
        }
    }
    return true;
}

RuleProfile mine_rules(const FingerprintRepository& repo, const MiningParams& params, bool parallel) {
    params.validate();
    if (repo.empty()) throw MiningError("cannot mine rules from an empty repository");

    const auto transactions = transactions_from(repo);
    const auto frequent = apriori(transactions, params.min_support, params.max_itemset_size, parallel);

    std::map<std::string, std::size_t, std::less<>> single;
    for (const auto& fi : frequent) {
        if (fi.items.size() == 1) single[fi.items.front()] = fi.count;
    }

    const double n = static_cast<double>(transactions.size());
    std::vector<AssociationRule> rules;
    for (const auto& fi : frequent) {
        if (fi.items.size() != 2) continue;
        // Items sort as "attr:..." < "table:...".
        const auto& attr = fi.items[0];
        const auto& table = fi.items[1];
        if (!starts_with(attr, kAttributePrefix) || !starts_with(table, kTablePrefix)) continue;
        AssociationRule rule;
        rule.antecedent = table.substr(kTablePrefix.size());
        rule.consequent = attr.substr(kAttributePrefix.size());
        rule.joint_count = fi.count;
        rule.antecedent_count = single.at(table);
        rule.support = static_cast<double>(fi.count) / n;
        rule.confidence = static_cast<double>(fi.count) / static_cast<double>(rule.antecedent_count);
        if (rule.support >= params.min_support && rule.confidence >= params.min_confidence) {
            rules.push_back(std::move(rule));
        }
    }
    return RuleProfile(std::move(rules), params, transactions.size());
}

bool profile_contains(const RuleProfile& profile, const Relation& rel) {
    return profile.contains(rel);
}

std::string save_profile(const RuleProfile& profile) {
    std::string out = "# ssf-rules v1 transactions=" + std::to_string(profile.transaction_count()) +
                      " min_support=" + format_rate(profile.params().min_support) +
                      " min_confidence=" + format_rate(profile.params().min_confidence) + "\n";
    for (const auto& r : profile.rules()) {
        out += r.antecedent + " -> " + r.consequent + " " + format_rate(r.support) + " " +
               format_rate(r.confidence) + "\n";
    }
    return out;
}

RuleProfile load_profile(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t transactions = 0;
    MiningParams params;
    std::vector<AssociationRule> rules;
    std::set<std::pair<std::string, std::string>> seen;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream hdr(line.substr(1));
            std::string magic, version;
            hdr >> magic >> version;
            if (magic != "ssf-rules") continue; // ordinary comment
            if (have_header) throw ProfileLoadError(line_no, "duplicate header");
            if (version != "v1") throw ProfileLoadError(line_no, "unsupported version '" + version + "'");
            bool got_tx = false, got_s = false, got_c = false;
            std::string field;
            while (hdr >> field) {
                const auto eq = field.find('=');
                if (eq == std::string::npos) throw ProfileLoadError(line_no, "bad header field '" + field + "'");
                const auto key = field.substr(0, eq);
                const std::string_view value = std::string_view(field).substr(eq + 1);
                if (key == "transactions") {
                    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), transactions);
                    if (ec != std::errc() || p != value.data() + value.size()) {
                        throw ProfileLoadError(line_no, "bad transactions count");
                    }
                    got_tx = true;
                } else if (key == "min_support") {
                    if (!parse_rate(value, params.min_support)) throw ProfileLoadError(line_no, "bad min_support");
                    got_s = true;
                } else if (key == "min_confidence") {
                    if (!parse_rate(value, params.min_confidence)) throw ProfileLoadError(line_no, "bad min_confidence");
                    got_c = true;
                } else {
                    throw ProfileLoadError(line_no, "unknown header field '" + key + "'");
                }
            }
            if (!got_tx || !got_s || !got_c) throw ProfileLoadError(line_no, "incomplete header");
            have_header = true;
            continue;
        }
        if (!have_header) throw ProfileLoadError(line_no, "expected '# ssf-rules v1' header");

        const auto arrow = line.find(" -> ");
        if (arrow == std::string::npos) throw ProfileLoadError(line_no, "expected '<table> -> <attribute> <support> <confidence>'");
        AssociationRule r;
        r.antecedent = trim(std::string_view(line).substr(0, arrow));
        std::string rest = line.substr(arrow + 4);
        const auto conf_sep = rest.find_last_of(' ');
        if (conf_sep == std::string::npos) throw ProfileLoadError(line_no, "missing support/confidence");
        const auto supp_sep = rest.find_last_of(' ', conf_sep == 0 ? 0 : conf_sep - 1);
        if (supp_sep == std::string::npos || conf_sep == 0) throw ProfileLoadError(line_no, "missing support/confidence");
        r.consequent = trim(std::string_view(rest).substr(0, supp_sep));
        if (r.antecedent.empty() || r.consequent.empty()) throw ProfileLoadError(line_no, "empty table or attribute");
        if (!parse_rate(trim(std::string_view(rest).substr(supp_sep + 1, conf_sep - supp_sep - 1)), r.support)) {
            throw ProfileLoadError(line_no, "support must be a number in [0, 1]");
        }
        if (!parse_rate(trim(std::string_view(rest).substr(conf_sep + 1)), r.confidence)) {
            throw ProfileLoadError(line_no, "confidence must be a number in [0, 1]");
        }
        if (r.support > r.confidence + 1e-6) {
            throw ProfileLoadError(line_no, "support exceeds confidence");
        }
        if (r.support + 1e-6 < params.min_support || r.confidence + 1e-6 < params.min_confidence) {
            throw ProfileLoadError(line_no, "rule below the header thresholds");
        }
        if (!seen.emplace(r.antecedent, r.consequent).second) {
            throw ProfileLoadError(line_no, "duplicate rule " + r.antecedent + " -> " + r.consequent);
        }
        // Counts are implied by the rates and the transaction total.
        r.joint_count = static_cast<std::size_t>(std::llround(r.support * static_cast<double>(transactions)));
        r.antecedent_count = r.confidence > 0.0
                                 ? static_cast<std::size_t>(std::llround(static_cast<double>(r.joint_count) / r.confidence))
                                 : 0;
        rules.push_back(std::move(r));
    }
    if (!have_header) throw ProfileLoadError(std::max<std::size_t>(line_no, 1), "missing '# ssf-rules v1' header");
    return RuleProfile(std::move(rules), params, transactions);
}

} // namespace ssf
