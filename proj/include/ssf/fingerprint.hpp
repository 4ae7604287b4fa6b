#pragma once

#include "ssf/sql_parser.hpp"

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssf {

enum class OperandClass { attribute, integer_literal, string_literal, other_literal };

/// Serialized class name as used in the repository XML
/// ("Integer_literal", "String_literal", "Other_literal").
const char* literal_class_name(OperandClass cls);

struct AbstractOperand {
    OperandClass cls = OperandClass::other_literal;
    std::string name; // attribute name; empty for literal classes

    bool is_attribute() const { return cls == OperandClass::attribute; }
    bool operator==(const AbstractOperand&) const = default;
};

struct FingerprintTerm {
    AbstractOperand lhs;
    AbstractOperand rhs;
    bool operator==(const FingerprintTerm&) const = default;
};

struct FingerprintSetOperation;

/// Literal-abstracted skeleton of one SELECT. `operator==` is exact member
/// equality (codec identity); structural matching for detection goes
/// through structural_equals.
struct QueryFingerprint {
    std::vector<std::string> projection;
    std::vector<std::string> from_tables;
    std::vector<FingerprintTerm> terms;
    std::vector<LogicalOperator> logical_operators;
    std::vector<std::string> order_by;
    std::vector<FingerprintSetOperation> set_operations;
    int residual_count = 0;
    int statement_count = 1;

    bool operator==(const QueryFingerprint&) const;
};

struct FingerprintSetOperation {
    SetOperator op = SetOperator::union_;
    QueryFingerprint query;
    bool operator==(const FingerprintSetOperation&) const = default;
};

class FingerprintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Collapses literal operands to their class and drops comparators.
/// Throws FingerprintError for non-SELECT input.
QueryFingerprint abstract_literals(const ParsedQuery& parsed);

/// Ordered comparison of every structural component. Literal operands match
/// each other regardless of class: a stored `id=?` must accept `id=42` and
/// `id='x'` alike, and a class wildcard would not be transitive.
bool structural_equals(const QueryFingerprint& a, const QueryFingerprint& b);

struct RepositoryKey {
    std::vector<std::string> projection;
    std::vector<std::string> from_tables;

    auto operator<=>(const RepositoryKey&) const = default;
    bool operator==(const RepositoryKey&) const = default;
};

std::string to_string(const RepositoryKey& key);

RepositoryKey repository_key(const QueryFingerprint& fp);

/// Ordered fingerprint store with a key index for retrieval of candidates
/// sharing projection and FROM clause.
class FingerprintRepository {
public:
    FingerprintRepository() = default;
    explicit FingerprintRepository(std::vector<QueryFingerprint> entries);

    void add(QueryFingerprint fp);

    const std::vector<QueryFingerprint>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Fingerprints stored under `key`, in insertion order.
    std::vector<const QueryFingerprint*> lookup(const RepositoryKey& key) const;

    bool operator==(const FingerprintRepository& o) const { return entries_ == o.entries_; }

private:
    std::vector<QueryFingerprint> entries_;
    std::map<RepositoryKey, std::vector<std::size_t>> index_;
};

} // namespace ssf
