#include "ssf/fingerprint.hpp"

namespace ssf {

namespace {

AbstractOperand abstract(const Operand& op) {
    switch (op.kind) {
        case OperandKind::attribute: return {OperandClass::attribute, op.name};
        case OperandKind::integer_literal: return {OperandClass::integer_literal, {}};
        case OperandKind::string_literal: return {OperandClass::string_literal, {}};
        case OperandKind::other_literal: return {OperandClass::other_literal, {}};
    }
    return {};
}

QueryFingerprint abstract_core(const ParsedQuery& parsed) {
    QueryFingerprint fp;
    fp.projection = parsed.projection;
    fp.from_tables = parsed.from_tables;
    fp.terms.reserve(parsed.predicates.size());
    for (const auto& p : parsed.predicates) {
        fp.terms.push_back({abstract(p.lhs), abstract(p.rhs)});
    }
    fp.logical_operators = parsed.logical_operators;
    fp.order_by = parsed.order_by;
    for (const auto& set : parsed.set_operations) {
        fp.set_operations.push_back({set.op, abstract_core(set.query)});
    }
    return fp;
}

bool operand_matches(const AbstractOperand& a, const AbstractOperand& b) {
    if (a.is_attribute() != b.is_attribute()) return false;
    return !a.is_attribute() || a.name == b.name;
}

} // namespace

const char* literal_class_name(OperandClass cls) {
    switch (cls) {
        case OperandClass::integer_literal: return "Integer_literal";
        case OperandClass::string_literal: return "String_literal";
        case OperandClass::other_literal: return "Other_literal";
        case OperandClass::attribute: break;
    }
    return "";
}

bool QueryFingerprint::operator==(const QueryFingerprint& o) const {
    return projection == o.projection && from_tables == o.from_tables && terms == o.terms &&
           logical_operators == o.logical_operators && order_by == o.order_by &&
           set_operations == o.set_operations && residual_count == o.residual_count &&
           statement_count == o.statement_count;
}

QueryFingerprint abstract_literals(const ParsedQuery& parsed) {
    if (parsed.command_type != CommandType::select) {
        throw FingerprintError("only SELECT statements can be fingerprinted");
    }
    QueryFingerprint fp = abstract_core(parsed);
    fp.residual_count = static_cast<int>(parsed.residual_tokens.size());
    fp.statement_count = parsed.statement_count;
    return fp;
}

bool structural_equals(const QueryFingerprint& a, const QueryFingerprint& b) {
    if (a.projection != b.projection || a.from_tables != b.from_tables ||
        a.logical_operators != b.logical_operators || a.order_by != b.order_by ||
        a.residual_count != b.residual_count || a.statement_count != b.statement_count ||
        a.terms.size() != b.terms.size() || a.set_operations.size() != b.set_operations.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (!operand_matches(a.terms[i].lhs, b.terms[i].lhs) ||
            !operand_matches(a.terms[i].rhs, b.terms[i].rhs)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.set_operations.size(); ++i) {
        if (a.set_operations[i].op != b.set_operations[i].op ||
            !structural_equals(a.set_operations[i].query, b.set_operations[i].query)) {
            return false;
        }
    }
    return true;
}

RepositoryKey repository_key(const QueryFingerprint& fp) {
    return {fp.projection, fp.from_tables};
}

std::string to_string(const RepositoryKey& key) {
    auto join = [](const std::vector<std::string>& parts) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += ',';
            out += parts[i];
        }
        return out;
    };
    return join(key.projection) + "|" + join(key.from_tables);
}

FingerprintRepository::FingerprintRepository(std::vector<QueryFingerprint> entries) {
    entries_.reserve(entries.size());
    for (auto& fp : entries) add(std::move(fp));
}

void FingerprintRepository::add(QueryFingerprint fp) {
    index_[repository_key(fp)].push_back(entries_.size());
    entries_.push_back(std::move(fp));
}

std::vector<const QueryFingerprint*> FingerprintRepository::lookup(const RepositoryKey& key) const {
    std::vector<const QueryFingerprint*> out;
    if (auto it = index_.find(key); it != index_.end()) {
        out.reserve(it->second.size());
        for (auto pos : it->second) out.push_back(&entries_[pos]);
    }
    return out;
}

} // namespace ssf
