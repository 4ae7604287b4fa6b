#pragma once

#include "ssf/bundle.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssf {

struct LogRecord {
    std::size_t line_number = 0;
    std::string sql;
    std::optional<std::string> source_tag;

    bool operator==(const LogRecord&) const = default;
};

class LogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BundleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrityError : public BundleError {
public:
    using BundleError::BundleError;
};

/// Byte offset of the first invalid UTF-8 sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes);

/// One record per non-blank line that does not start with '#'. A line of the
/// form `<ISO-8601 timestamp>\t<user>\t<sql>` keeps only the SQL field.
/// Throws LogError naming the byte offset of undecodable input.
std::vector<LogRecord> read_log(std::string_view bytes, std::optional<std::string> source_tag = {});
std::vector<LogRecord> read_log_file(const std::filesystem::path& path);

/// Builds the profile bundle. Records that are not clean single SELECT
/// statements are skipped and listed in the manifest; throws TrainingError
/// when nothing usable remains.
ProfileBundle train(const std::vector<LogRecord>& records, const MiningParams& params,
                    const KeywordSet& keywords = KeywordSet::defaults());

/// Writes queries.xml, rules.profile, keywords.txt and manifest.txt.
void save_bundle(const ProfileBundle& bundle, const std::filesystem::path& directory);

/// Reads a bundle directory. manifest.txt is optional; the other three files
/// are required. Throws BundleError naming the failing file, IntegrityError
/// when the files disagree with each other.
ProfileBundle load_bundle(const std::filesystem::path& directory);

std::string format_manifest(const ProfileBundle& bundle);

/// Compares repositories, rules, keywords and manifests; the manifest
/// creation timestamp is ignored.
bool same_bundle(const ProfileBundle& a, const ProfileBundle& b);

inline constexpr const char* kRepositoryFile = "queries.xml";
inline constexpr const char* kRulesFile = "rules.profile";
inline constexpr const char* kKeywordsFile = "keywords.txt";
inline constexpr const char* kManifestFile = "manifest.txt";

} // namespace ssf
