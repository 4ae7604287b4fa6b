#pragma once

#include "ssf/fingerprint.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssf {

class RepositoryLoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Canonical repository document: root <AllQueries>, one <Query no="N"> per
/// entry, two-space indentation, one element per line, text padded with a
/// single space on each side. An empty repository is `<AllQueries></AllQueries>`.
/// Throws FingerprintError for entries carrying residual tokens or more than
/// one statement.
std::string repository_to_xml(const FingerprintRepository& repo);

/// Reads the canonical format plus the variant spellings found in older
/// documents (`FromClause`, `select command`, `Integer Literal`, ...).
/// Errors name the offending element and the 1-based query number.
FingerprintRepository repository_from_xml(std::string_view xml);

} // namespace ssf
