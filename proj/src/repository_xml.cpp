#include "ssf/repository_xml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cctype>
#include <sstream>

namespace ssf {

namespace {

namespace pt = boost::property_tree;

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void element(std::string& out, std::string_view tag, std::string_view text) {
    out += "    <";
    out += tag;
    out += "> ";
    out += escape(text);
    out += " </";
    out += tag;
    out += ">\n";
}

std::string operand_text(const AbstractOperand& op) {
    return op.is_attribute() ? op.name : literal_class_name(op.cls);
}

void write_query(std::string& out, const QueryFingerprint& fp) {
    element(out, "commandType", "select");
    for (const auto& col : fp.projection) element(out, "query_column", col);
    for (const auto& table : fp.from_tables) element(out, "fromClause", table);
    for (std::size_t i = 0; i < fp.terms.size(); ++i) {
        if (i > 0) element(out, "logical_operator", to_string(fp.logical_operators[i - 1]));
        element(out, "LHS", operand_text(fp.terms[i].lhs));
        element(out, "RHS", operand_text(fp.terms[i].rhs));
    }
    for (const auto& col : fp.order_by) element(out, "orderBy", col);
    for (const auto& set : fp.set_operations) {
        element(out, "setOperator", to_string(set.op));
        write_query(out, set.query);
    }
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Lowercase with runs of spaces/underscores collapsed to a single '_'.
std::string fold(std::string_view s) {
    std::string out;
    for (char c : trim(s)) {
        if (c == ' ' || c == '_' || c == '\t' || c == '\n' || c == '\r') {
            if (!out.empty() && out.back() != '_') out += '_';
        } else {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return out;
}

enum class Tag { command_type, query_column, from_clause, lhs, rhs, logical_operator, order_by, set_operator };

bool tag_from_name(std::string_view name, Tag& tag) {
    const std::string f = fold(name);
    if (f == "commandtype") tag = Tag::command_type;
    else if (f == "query_column") tag = Tag::query_column;
    else if (f == "fromclause") tag = Tag::from_clause;
    else if (f == "lhs") tag = Tag::lhs;
    else if (f == "rhs") tag = Tag::rhs;
    else if (f == "logical_operator") tag = Tag::logical_operator;
    else if (f == "orderby") tag = Tag::order_by;
    else if (f == "setoperator") tag = Tag::set_operator;
    else return false;
    return true;
}

// Attribute names are always written lowercase, so a literal class is
// recognised only when the text differs from its folded form
// ("Integer_literal", "string Literal") and folds to a known class.
AbstractOperand operand_from_text(const std::string& text) {
    const std::string f = fold(text);
    if (f != text) {
        if (f == "integer_literal") return {OperandClass::integer_literal, {}};
        if (f == "string_literal") return {OperandClass::string_literal, {}};
        if (f == "other_literal") return {OperandClass::other_literal, {}};
    }
    return {OperandClass::attribute, to_lower(text)};
}

// Walks the children of one <Query>, enforcing the element order
// commandType, query_column*, fromClause*, (LHS RHS (logical_operator LHS RHS)*)?,
// orderBy*, then optionally setOperator followed by a nested query.
class QueryReader {
public:
    explicit QueryReader(std::size_t number) : number_(number) {}

    QueryFingerprint read(const pt::ptree& query) {
        QueryFingerprint root;
        chain_.push_back(&root);
        for (const auto& [name, child] : query) {
            if (name == "<xmlattr>") continue;
            Tag tag;
            if (!tag_from_name(name, tag)) fail(name, "unknown element");
            if (!child.empty()) fail(name, "element must contain text only");
            accept(tag, name, trim(child.data()));
        }
        finish("Query");
        return root;
    }

private:
    enum Phase { start, command, columns, tables, lhs, rhs, logical, order, set_op };

    [[noreturn]] void fail(std::string_view element, std::string_view what) const {
        std::ostringstream msg;
        msg << "query " << number_ << ": <" << element << ">: " << what;
        throw RepositoryLoadError(msg.str());
    }

    void require_text(const std::string& name, const std::string& text) const {
        if (text.empty()) fail(name, "empty text");
    }

    void accept(Tag tag, const std::string& name, const std::string& text) {
        QueryFingerprint& fp = *chain_.back();
        switch (tag) {
            case Tag::command_type: {
                if (phase_ != start) fail(name, "out of order");
                auto word = fold(text);
                if (word != "select" && word != "select_command") fail(name, "unsupported command '" + text + "'");
                phase_ = command;
                break;
            }
            case Tag::query_column:
                if (phase_ != command && phase_ != columns) fail(name, "out of order");
                require_text(name, text);
                fp.projection.push_back(to_lower(text));
                phase_ = columns;
                break;
            case Tag::from_clause:
                if (phase_ != command && phase_ != columns && phase_ != tables) fail(name, "out of order");
                require_text(name, text);
                fp.from_tables.push_back(to_lower(text));
                phase_ = tables;
                break;
            case Tag::lhs:
                if (phase_ == rhs || phase_ == lhs || phase_ == order || phase_ == set_op || phase_ == start) {
                    fail(name, "out of order");
                }
                if (!fp.terms.empty() && phase_ != logical) fail(name, "missing logical_operator");
                require_text(name, text);
                fp.terms.push_back({operand_from_text(text), {}});
                phase_ = lhs;
                break;
            case Tag::rhs:
                if (phase_ != lhs) fail(name, "RHS without LHS");
                require_text(name, text);
                fp.terms.back().rhs = operand_from_text(text);
                phase_ = rhs;
                break;
            case Tag::logical_operator: {
                if (phase_ != rhs) fail(name, "out of order");
                auto word = fold(text);
                if (word == "and") fp.logical_operators.push_back(LogicalOperator::and_);
                else if (word == "or") fp.logical_operators.push_back(LogicalOperator::or_);
                else fail(name, "unknown operator '" + text + "'");
                phase_ = logical;
                break;
            }
            case Tag::order_by:
                if (phase_ == start || phase_ == lhs || phase_ == logical || phase_ == set_op) fail(name, "out of order");
                require_text(name, text);
                fp.order_by.push_back(to_lower(text));
                phase_ = order;
                break;
            case Tag::set_operator: {
                if (phase_ == start || phase_ == lhs || phase_ == logical || phase_ == set_op) fail(name, "out of order");
                auto word = fold(text);
                SetOperator op;
                if (word == "union") op = SetOperator::union_;
                else if (word == "union_all") op = SetOperator::union_all;
                else fail(name, "unknown set operator '" + text + "'");
                // Members of a UNION chain hang off the first query.
                QueryFingerprint& head = *chain_.front();
                head.set_operations.push_back({op, {}});
                chain_.push_back(&head.set_operations.back().query);
                phase_ = set_op;
                break;
            }
        }
        if (phase_ == set_op) phase_ = start;
    }

    void finish(std::string_view name) const {
        if (phase_ == start) fail(name, "missing commandType");
        if (phase_ == lhs) fail(name, "LHS without RHS");
        if (phase_ == logical) fail(name, "dangling logical_operator");
    }

    std::size_t number_;
    Phase phase_ = start;
    std::vector<QueryFingerprint*> chain_;
};

} // namespace

std::string repository_to_xml(const FingerprintRepository& repo) {
    if (repo.empty()) return "<AllQueries></AllQueries>\n";
    std::string out = "<AllQueries>\n";
    std::size_t number = 0;
    for (const auto& fp : repo.entries()) {
        ++number;
        if (fp.residual_count != 0 || fp.statement_count != 1) {
            throw FingerprintError("query " + std::to_string(number) +
                                   " is not storable: residual tokens or multiple statements");
        }
        out += "  <Query no=\"" + std::to_string(number) + "\">\n";
        write_query(out, fp);
        out += "  </Query>\n";
    }
    out += "</AllQueries>\n";
    return out;
}

FingerprintRepository repository_from_xml(std::string_view xml) {
    pt::ptree doc;
    try {
        std::istringstream in{std::string(xml)};
        pt::read_xml(in, doc, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw RepositoryLoadError("malformed XML: " + e.message() + " (line " +
                                  std::to_string(e.line()) + ")");
    }
    if (doc.size() != 1 || doc.begin()->first != "AllQueries") {
        throw RepositoryLoadError("expected a single <AllQueries> root element");
    }

    FingerprintRepository repo;
    std::size_t number = 0;
    for (const auto& [name, child] : doc.begin()->second) {
        if (name == "<xmlattr>") continue;
        ++number;
        if (name != "Query") {
            throw RepositoryLoadError("query " + std::to_string(number) + ": <" + name +
                                      ">: unknown element");
        }
        repo.add(QueryReader(number).read(child));
    }
    return repo;
}

} // namespace ssf
